//! Minimal PNG plotting: line plots with optional log axes and a colored
//! grid for regime maps. Keeps rendering dependency-free apart from the
//! PNG encoder; labels use an embedded 3x5 digit font.

use std::path::Path;

use image::{Rgb, RgbImage};

use crate::error::{Error, Result};

const WIDTH: u32 = 800;
const HEIGHT: u32 = 560;
const MARGIN_L: u32 = 70;
const MARGIN_R: u32 = 20;
const MARGIN_T: u32 = 20;
const MARGIN_B: u32 = 40;

pub const SERIES_COLORS: [Rgb<u8>; 4] = [
    Rgb([31, 119, 180]),
    Rgb([214, 39, 40]),
    Rgb([44, 160, 44]),
    Rgb([148, 103, 189]),
];

/// 3x5 glyphs for "0123456789.-e+GFUI", row-major bits.
fn glyph(ch: char) -> Option<[u8; 5]> {
    let rows = match ch {
        '0' => [0b111, 0b101, 0b101, 0b101, 0b111],
        '1' => [0b010, 0b110, 0b010, 0b010, 0b111],
        '2' => [0b111, 0b001, 0b111, 0b100, 0b111],
        '3' => [0b111, 0b001, 0b111, 0b001, 0b111],
        '4' => [0b101, 0b101, 0b111, 0b001, 0b001],
        '5' => [0b111, 0b100, 0b111, 0b001, 0b111],
        '6' => [0b111, 0b100, 0b111, 0b101, 0b111],
        '7' => [0b111, 0b001, 0b010, 0b010, 0b010],
        '8' => [0b111, 0b101, 0b111, 0b101, 0b111],
        '9' => [0b111, 0b101, 0b111, 0b001, 0b111],
        '.' => [0b000, 0b000, 0b000, 0b000, 0b010],
        '-' => [0b000, 0b000, 0b111, 0b000, 0b000],
        'e' => [0b000, 0b111, 0b111, 0b100, 0b111],
        '+' => [0b000, 0b010, 0b111, 0b010, 0b000],
        'G' => [0b111, 0b100, 0b101, 0b101, 0b111],
        'F' => [0b111, 0b100, 0b111, 0b100, 0b100],
        'U' => [0b101, 0b101, 0b101, 0b101, 0b111],
        'I' => [0b111, 0b010, 0b010, 0b010, 0b111],
        _ => return None,
    };
    Some(rows)
}

fn draw_text(img: &mut RgbImage, x: u32, y: u32, text: &str, color: Rgb<u8>) {
    let scale = 2;
    let mut cx = x;
    for ch in text.chars() {
        if let Some(rows) = glyph(ch) {
            for (ry, row) in rows.iter().enumerate() {
                for rx in 0..3 {
                    if row & (0b100 >> rx) != 0 {
                        for sy in 0..scale {
                            for sx in 0..scale {
                                let px = cx + rx * scale + sx;
                                let py = y + ry as u32 * scale + sy;
                                if px < img.width() && py < img.height() {
                                    img.put_pixel(px, py, color);
                                }
                            }
                        }
                    }
                }
            }
        }
        cx += 4 * scale;
    }
}

fn draw_line(img: &mut RgbImage, x0: f64, y0: f64, x1: f64, y1: f64, color: Rgb<u8>) {
    let steps = ((x1 - x0).abs().max((y1 - y0).abs()).ceil() as usize).max(1);
    for s in 0..=steps {
        let f = s as f64 / steps as f64;
        let x = x0 + (x1 - x0) * f;
        let y = y0 + (y1 - y0) * f;
        if x >= 0.0 && y >= 0.0 && (x as u32) < img.width() && (y as u32) < img.height() {
            img.put_pixel(x as u32, y as u32, color);
        }
    }
}

fn save(img: &RgbImage, path: &Path) -> Result<()> {
    img.save(path)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))
}

struct AxisMap {
    lo: f64,
    hi: f64,
    log: bool,
}

impl AxisMap {
    fn new(values: impl Iterator<Item = f64>, log: bool) -> AxisMap {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            if log && !(v > 0.0) {
                continue;
            }
            if v.is_finite() {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !lo.is_finite() || !hi.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if lo == hi {
            hi = lo + 1.0;
            if log {
                hi = lo * 10.0;
            }
        }
        AxisMap { lo, hi, log }
    }

    fn frac(&self, v: f64) -> f64 {
        if self.log {
            if !(v > 0.0) {
                return 0.0;
            }
            (v.ln() - self.lo.ln()) / (self.hi.ln() - self.lo.ln())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }
}

/// Line plot of one or more series. Points with nonpositive coordinates
/// are dropped on log axes.
pub fn line_plot(
    path: &Path,
    series: &[(&[(f64, f64)], Rgb<u8>)],
    log_x: bool,
    log_y: bool,
) -> Result<()> {
    let mut img = RgbImage::from_pixel(WIDTH, HEIGHT, Rgb([255, 255, 255]));
    let xs = AxisMap::new(
        series.iter().flat_map(|(s, _)| s.iter().map(|q| q.0)),
        log_x,
    );
    let ys = AxisMap::new(
        series.iter().flat_map(|(s, _)| s.iter().map(|q| q.1)),
        log_y,
    );
    let plot_w = (WIDTH - MARGIN_L - MARGIN_R) as f64;
    let plot_h = (HEIGHT - MARGIN_T - MARGIN_B) as f64;
    let to_px = |x: f64, y: f64| {
        (
            MARGIN_L as f64 + xs.frac(x).clamp(0.0, 1.0) * plot_w,
            MARGIN_T as f64 + (1.0 - ys.frac(y).clamp(0.0, 1.0)) * plot_h,
        )
    };

    let axis = Rgb([0, 0, 0]);
    let (x0, y0) = (MARGIN_L as f64, (HEIGHT - MARGIN_B) as f64);
    draw_line(&mut img, x0, MARGIN_T as f64, x0, y0, axis);
    draw_line(&mut img, x0, y0, (WIDTH - MARGIN_R) as f64, y0, axis);
    draw_text(&mut img, 4, MARGIN_T, &format!("{:.1e}", ys.hi), axis);
    draw_text(
        &mut img,
        4,
        HEIGHT - MARGIN_B - 12,
        &format!("{:.1e}", ys.lo),
        axis,
    );
    draw_text(
        &mut img,
        MARGIN_L,
        HEIGHT - MARGIN_B + 8,
        &format!("{:.1e}", xs.lo),
        axis,
    );
    draw_text(
        &mut img,
        WIDTH - MARGIN_R - 70,
        HEIGHT - MARGIN_B + 8,
        &format!("{:.1e}", xs.hi),
        axis,
    );

    for (points, color) in series {
        let mut prev: Option<(f64, f64)> = None;
        for &(x, y) in points.iter() {
            if (log_x && !(x > 0.0)) || (log_y && !(y > 0.0)) {
                prev = None;
                continue;
            }
            let px = to_px(x, y);
            if let Some(pp) = prev {
                draw_line(&mut img, pp.0, pp.1, px.0, px.1, *color);
            }
            prev = Some(px);
        }
    }
    save(&img, path)
}

/// Colored grid over `(m, p)` cells; `classes` is row-major over
/// `p` (rows) by `m` (columns) and indexes the four verdict classes
/// G, F, U, I. A legend with the class letters sits below the grid.
pub fn heat_map(path: &Path, n_m: usize, n_p: usize, classes: &[usize]) -> Result<()> {
    const CLASS_COLORS: [Rgb<u8>; 4] = [
        Rgb([60, 145, 230]),  // global
        Rgb([220, 60, 50]),   // finite blow-up
        Rgb([240, 180, 40]),  // growing unbounded
        Rgb([160, 160, 160]), // inconclusive
    ];
    let mut img = RgbImage::from_pixel(WIDTH, HEIGHT, Rgb([255, 255, 255]));
    let plot_w = (WIDTH - MARGIN_L - MARGIN_R) as f64;
    let plot_h = (HEIGHT - MARGIN_T - MARGIN_B - 30) as f64;
    for (idx, &class) in classes.iter().enumerate() {
        let (col, row) = (idx % n_m, idx / n_m);
        let x_lo = MARGIN_L as f64 + plot_w * col as f64 / n_m as f64;
        let x_hi = MARGIN_L as f64 + plot_w * (col + 1) as f64 / n_m as f64;
        let y_hi = MARGIN_T as f64 + plot_h * (n_p - row) as f64 / n_p as f64;
        let y_lo = MARGIN_T as f64 + plot_h * (n_p - 1 - row) as f64 / n_p as f64;
        for y in y_lo as u32..y_hi as u32 {
            for x in x_lo as u32 + 1..x_hi as u32 {
                if x < WIDTH && y < HEIGHT {
                    img.put_pixel(x, y, CLASS_COLORS[class.min(3)]);
                }
            }
        }
    }
    // Legend: one colored square and letter per class.
    let legend_y = HEIGHT - MARGIN_B;
    for (i, (color, label)) in CLASS_COLORS.iter().zip(["G", "F", "U", "I"]).enumerate() {
        let x0 = MARGIN_L + (i as u32) * 90;
        for y in legend_y..legend_y + 14 {
            for x in x0..x0 + 14 {
                img.put_pixel(x, y, *color);
            }
        }
        draw_text(&mut img, x0 + 20, legend_y + 2, label, Rgb([0, 0, 0]));
    }
    save(&img, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_plot_files() {
        let dir = std::env::temp_dir().join("pmreact-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        let pts: Vec<(f64, f64)> = (1..100).map(|i| (i as f64, (i as f64).powi(2))).collect();
        let path = dir.join("line.png");
        line_plot(&path, &[(&pts, SERIES_COLORS[0])], true, true).unwrap();
        assert!(path.exists());
        let hm = dir.join("heat.png");
        heat_map(&hm, 3, 3, &[0, 1, 2, 3, 0, 1, 2, 3, 0]).unwrap();
        assert!(hm.exists());
    }
}
