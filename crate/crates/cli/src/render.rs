//! ASCII and SVG drawings of fans and polygons.
//!
//! Both formats are plain string builders over integer coordinates, so the
//! output is byte-for-byte deterministic.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use toric_stab::{Fan2D, LatticePolytope};

/// Pixels per lattice unit in SVG output.
const UNIT: i64 = 40;
const MARGIN: i64 = 20;
/// Largest grid radius drawn.
const MAX_RADIUS: i64 = 60;

#[derive(Debug)]
pub struct TooLarge(pub i64);

fn small(v: &BigInt) -> i64 {
    v.to_i64().unwrap_or(i64::MAX)
}

fn radius(points: &[(i64, i64)]) -> Result<i64, TooLarge> {
    let r = points.iter().map(|&(x, y)| x.abs().max(y.abs())).max().unwrap_or(0) + 1;
    if r > MAX_RADIUS {
        Err(TooLarge(r))
    } else {
        Ok(r)
    }
}

fn fan_points(fan: &Fan2D) -> Vec<(i64, i64)> {
    fan.rays().iter().map(|r| (small(r.x()), small(r.y()))).collect()
}

fn poly_points(p: &LatticePolytope) -> Vec<(i64, i64)> {
    p.vertices().iter().map(|v| (small(&v.x), small(&v.y))).collect()
}

fn arrow_glyph(x: i64, y: i64) -> char {
    match (x.signum(), y.signum()) {
        (1, 0) => '>',
        (-1, 0) => '<',
        (0, 1) => '^',
        (0, -1) => 'v',
        (sx, sy) if sx == sy => '/',
        _ => '\\',
    }
}

fn ascii_grid(r: i64, cell: impl Fn(i64, i64) -> char) -> String {
    let mut s = String::new();
    for y in (-r..=r).rev() {
        let row: Vec<String> = (-r..=r).map(|x| cell(x, y).to_string()).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

/// Dot grid with the origin `o` and a glyph at the tip of every ray.
pub fn fan_ascii(fan: &Fan2D) -> Result<String, TooLarge> {
    let tips = fan_points(fan);
    let r = radius(&tips)?;
    Ok(ascii_grid(r, |x, y| {
        if (x, y) == (0, 0) {
            'o'
        } else if tips.contains(&(x, y)) {
            arrow_glyph(x, y)
        } else {
            '.'
        }
    }))
}

/// Lattice points of the polygon: `#` vertices, `+` other boundary points,
/// `*` interior points, `.` outside.
pub fn polytope_ascii(p: &LatticePolytope) -> Result<String, TooLarge> {
    let vs = poly_points(p);
    let r = radius(&vs)?;
    let n = vs.len();
    Ok(ascii_grid(r, |x, y| {
        if vs.contains(&(x, y)) {
            return '#';
        }
        let sides: Vec<i64> = (0..n)
            .map(|i| {
                let (a, b) = (vs[i], vs[(i + 1) % n]);
                (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0)
            })
            .collect();
        if sides.iter().any(|s| *s < 0) {
            '.'
        } else if sides.contains(&0) {
            '+'
        } else {
            '*'
        }
    }))
}

struct Canvas {
    r: i64,
    body: String,
}

impl Canvas {
    fn new(r: i64) -> Self {
        let size = 2 * r * UNIT + 2 * MARGIN;
        let mut body = String::new();
        let _ = writeln!(
            body,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
        );
        let _ = writeln!(body, "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>");
        let mut c = Canvas { r, body };
        c.grid();
        c
    }

    fn px(&self, x: i64, y: i64) -> (i64, i64) {
        ((x + self.r) * UNIT + MARGIN, (self.r - y) * UNIT + MARGIN)
    }

    fn grid(&mut self) {
        let _ = writeln!(self.body, "<g fill=\"#999999\">");
        for y in (-self.r..=self.r).rev() {
            for x in -self.r..=self.r {
                let (cx, cy) = self.px(x, y);
                let _ = writeln!(self.body, "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"2\"/>");
            }
        }
        let _ = writeln!(self.body, "</g>");
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

/// Arrows from the origin to every ray over a unit dot grid.
pub fn fan_svg(fan: &Fan2D) -> Result<String, TooLarge> {
    let tips = fan_points(fan);
    let mut c = Canvas::new(radius(&tips)?);
    let _ = writeln!(
        c.body,
        "<defs><marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"black\"/></marker></defs>"
    );
    let (ox, oy) = c.px(0, 0);
    let _ = writeln!(c.body, "<g stroke=\"black\" stroke-width=\"2\">");
    for &(x, y) in &tips {
        let (tx, ty) = c.px(x, y);
        let _ = writeln!(
            c.body,
            "<line x1=\"{ox}\" y1=\"{oy}\" x2=\"{tx}\" y2=\"{ty}\" marker-end=\"url(#head)\"/>"
        );
    }
    let _ = writeln!(c.body, "</g>");
    Ok(c.finish())
}

/// Polygon outline over a unit dot grid.
pub fn polytope_svg(p: &LatticePolytope) -> Result<String, TooLarge> {
    let vs = poly_points(p);
    let mut c = Canvas::new(radius(&vs)?);
    let pts: Vec<String> = vs
        .iter()
        .map(|&(x, y)| {
            let (sx, sy) = c.px(x, y);
            format!("{sx},{sy}")
        })
        .collect();
    let _ = writeln!(
        c.body,
        "<polygon points=\"{}\" fill=\"#dddddd\" stroke=\"black\" stroke-width=\"2\"/>",
        pts.join(" ")
    );
    let (ox, oy) = c.px(0, 0);
    let _ = writeln!(c.body, "<circle cx=\"{ox}\" cy=\"{oy}\" r=\"3\" fill=\"black\"/>");
    Ok(c.finish())
}
