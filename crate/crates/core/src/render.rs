//! Quadrant-coloured phase portraits and amplitude portraits of `Delta5`
//! (and `Delta_{-q}`), binary PPM output, and detection of the points where
//! all four phase quadrants meet.

use crate::error::{Error, Result};
use crate::evalcore::EvalOptions;
use crate::quotient::{delta_q, QuotientKind};
use num_complex::Complex64;
use rayon::prelude::*;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub type Rgb = [u8; 3];

pub const YELLOW: Rgb = [255, 220, 0];
pub const RED: Rgb = [220, 30, 30];
pub const PURPLE: Rgb = [130, 0, 160];
pub const LIGHT_BLUE: Rgb = [120, 200, 255];
pub const BLACK: Rgb = [0, 0, 0];
pub const WHITE: Rgb = [255, 255, 255];

pub const MAX_PIXELS: u64 = 40_000_000;
const UNIT_BAND: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortraitMode {
    PhaseQuadrant,
    Amplitude,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitSpec {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub width: u32,
    pub height: u32,
    pub mode: PortraitMode,
    pub function: QuotientKind,
}

impl PortraitSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.sigma_min, self.sigma_max, self.t_min, self.t_max].iter().all(|x| x.is_finite());
        if !finite || self.sigma_min >= self.sigma_max || self.t_min >= self.t_max {
            return Err(Error::SpecInvalid(format!(
                "need sigma_min < sigma_max and t_min < t_max, got [{}, {}] x [{}, {}]",
                self.sigma_min, self.sigma_max, self.t_min, self.t_max
            )));
        }
        let pixels = u64::from(self.width) * u64::from(self.height);
        if pixels == 0 || pixels > MAX_PIXELS {
            return Err(Error::SpecInvalid(format!("{}x{} pixels outside 1..={MAX_PIXELS}", self.width, self.height)));
        }
        Ok(())
    }

    pub fn pixel_width(&self) -> f64 {
        (self.sigma_max - self.sigma_min) / f64::from(self.width)
    }

    pub fn pixel_height(&self) -> f64 {
        (self.t_max - self.t_min) / f64::from(self.height)
    }

    /// Centre of pixel column `i`, row `j`; row 0 is the top (`t_max`).
    pub fn pixel_center(&self, i: u32, j: u32) -> Complex64 {
        Complex64::new(
            self.sigma_min + (f64::from(i) + 0.5) * self.pixel_width(),
            self.t_max - (f64::from(j) + 0.5) * self.pixel_height(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelGrid {
    pub width: u32,
    pub height: u32,
    /// Row-major RGB triples.
    pub pixels: Vec<u8>,
}

impl PixelGrid {
    pub fn get(&self, i: u32, j: u32) -> Rgb {
        let k = 3 * (j as usize * self.width as usize + i as usize);
        [self.pixels[k], self.pixels[k + 1], self.pixels[k + 2]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrant {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quadrant {
    pub fn color(self) -> Rgb {
        match self {
            Quadrant::Q1 => YELLOW,
            Quadrant::Q2 => RED,
            Quadrant::Q3 => PURPLE,
            Quadrant::Q4 => LIGHT_BLUE,
        }
    }

    pub fn from_color(c: Rgb) -> Option<Quadrant> {
        match c {
            YELLOW => Some(Quadrant::Q1),
            RED => Some(Quadrant::Q2),
            PURPLE => Some(Quadrant::Q3),
            LIGHT_BLUE => Some(Quadrant::Q4),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        match self {
            Quadrant::Q1 => 1,
            Quadrant::Q2 => 2,
            Quadrant::Q3 => 4,
            Quadrant::Q4 => 8,
        }
    }
}

/// Q1: Re > 0, Im >= 0; Q2: Re <= 0, Im > 0; Q3: Re < 0, Im <= 0;
/// Q4: Re >= 0, Im < 0. An exact zero counts as Q1.
pub fn quadrant(v: Complex64) -> Quadrant {
    match (v.re, v.im) {
        (re, im) if re > 0.0 && im >= 0.0 => Quadrant::Q1,
        (re, im) if re <= 0.0 && im > 0.0 => Quadrant::Q2,
        (re, im) if re < 0.0 && im <= 0.0 => Quadrant::Q3,
        (re, im) if re >= 0.0 && im < 0.0 => Quadrant::Q4,
        _ => Quadrant::Q1,
    }
}

/// Colour for a modulus in the amplitude portrait.
pub fn amplitude_color(modulus: f64) -> Rgb {
    if (modulus - 1.0).abs() <= UNIT_BAND {
        return WHITE;
    }
    let decades = modulus.log10().abs().min(1.0);
    let level = (128.0 + 127.0 * decades).round() as u8;
    if modulus > 1.0 {
        [0, 0, level]
    } else {
        [0, level, 0]
    }
}

fn render_with(spec: &PortraitSpec, color: impl Fn(Complex64) -> Rgb + Sync) -> Result<PixelGrid> {
    spec.validate()?;
    let opts = EvalOptions::default();
    let row_bytes = 3 * spec.width as usize;
    let mut pixels = vec![0u8; row_bytes * spec.height as usize];
    pixels.par_chunks_mut(row_bytes).enumerate().for_each(|(j, row)| {
        for i in 0..spec.width {
            let s = spec.pixel_center(i, j as u32);
            let rgb = match delta_q(spec.function, s, &opts) {
                Ok(v) => color(v),
                Err(_) => BLACK,
            };
            row[3 * i as usize..3 * i as usize + 3].copy_from_slice(&rgb);
        }
    });
    Ok(PixelGrid { width: spec.width, height: spec.height, pixels })
}

pub fn render_phase_quadrants(spec: &PortraitSpec) -> Result<PixelGrid> {
    if spec.mode != PortraitMode::PhaseQuadrant {
        return Err(Error::SpecInvalid("phase portrait needs mode phase_quadrant".into()));
    }
    render_with(spec, |v| quadrant(v).color())
}

pub fn render_amplitude(spec: &PortraitSpec) -> Result<PixelGrid> {
    if spec.mode != PortraitMode::Amplitude {
        return Err(Error::SpecInvalid("amplitude portrait needs mode amplitude".into()));
    }
    render_with(spec, |v| amplitude_color(v.norm()))
}

/// Render according to `spec.mode`.
pub fn render(spec: &PortraitSpec) -> Result<PixelGrid> {
    match spec.mode {
        PortraitMode::PhaseQuadrant => render_phase_quadrants(spec),
        PortraitMode::Amplitude => render_amplitude(spec),
    }
}

/// Block size in pixels covering a roughly square patch of the s-plane of
/// side three times the larger pixel extent; 3x3 for square pixels, so a
/// point sitting on a pixel centre is still surrounded.
pub fn detection_block(spec: &PortraitSpec) -> (u32, u32) {
    let (pw, ph) = (spec.pixel_width(), spec.pixel_height());
    let side = 3.0 * pw.max(ph);
    let bw = ((side / pw - 1e-9).ceil() as u32).max(3).min(spec.width);
    let bh = ((side / ph - 1e-9).ceil() as u32).max(3).min(spec.height);
    (bw, bh)
}

/// Centres of the points where all four quadrant colours meet.
///
/// A window of [`detection_block`] pixels qualifies when it shows all four
/// colours; qualifying windows that touch or overlap form one cluster. Within
/// a cluster's pixels the colour transitions trace the zero sets of the real
/// and imaginary parts; straight lines fitted to each are intersected to place
/// the point. When a fit is poor the centre of the common intersection of the
/// windows is used (the centroid of window centres if they share no pixel).
/// Points within three pixels of each other are merged.
pub fn locate_quadrant_meeting_points(grid: &PixelGrid, spec: &PortraitSpec) -> Vec<(f64, f64)> {
    let (bw, bh) = detection_block(spec);
    if grid.width < bw || grid.height < bh || grid.pixels.len() != 3 * grid.width as usize * grid.height as usize {
        return Vec::new();
    }
    let (w, h) = (grid.width as usize, grid.height as usize);
    let quads: Vec<Option<Quadrant>> =
        grid.pixels.chunks_exact(3).map(|c| Quadrant::from_color([c[0], c[1], c[2]])).collect();
    let masks: Vec<u8> = quads.iter().map(|q| q.map_or(0, Quadrant::bit)).collect();
    // column masks over bh rows, then row windows over bw columns
    let (nx, ny) = (w - bw as usize + 1, h - bh as usize + 1);
    let mut qualifies = vec![false; nx * ny];
    for y in 0..ny {
        let column: Vec<u8> = (0..w).map(|x| (y..y + bh as usize).fold(0, |m, r| m | masks[r * w + x])).collect();
        for x in 0..nx {
            let m = column[x..x + bw as usize].iter().fold(0, |m, c| m | c);
            qualifies[y * nx + x] = m == 15;
        }
    }

    let mut seen = vec![false; nx * ny];
    let mut points: Vec<(f64, f64, usize)> = Vec::new();
    for start in 0..nx * ny {
        if !qualifies[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut members = Vec::new();
        while let Some(k) = stack.pop() {
            members.push(k);
            let (x, y) = ((k % nx) as i64, (k / nx) as i64);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (xx, yy) = (x + dx, y + dy);
                    if xx < 0 || yy < 0 || xx >= nx as i64 || yy >= ny as i64 {
                        continue;
                    }
                    let kk = yy as usize * nx + xx as usize;
                    if qualifies[kk] && !seen[kk] {
                        seen[kk] = true;
                        stack.push(kk);
                    }
                }
            }
        }
        let xs = members.iter().map(|k| k % nx);
        let ys = members.iter().map(|k| k / nx);
        let (x_min, x_max) = (xs.clone().min().unwrap_or(0), xs.clone().max().unwrap_or(0));
        let (y_min, y_max) = (ys.clone().min().unwrap_or(0), ys.clone().max().unwrap_or(0));
        let region = Region { x0: x_min, x1: x_max + bw as usize, y0: y_min, y1: y_max + bh as usize };
        // pixel-index coordinates; pixel k spans [k, k + 1)
        let (x_lo, x_hi) = (x_max, x_min + bw as usize);
        let (y_lo, y_hi) = (y_max, y_min + bh as usize);
        let (cx, cy) = match crossing_point(&quads, w, &region) {
            Some(p) => {
                let q = refine_crossing(&quads, w, h, p, (bw, bh));
                let inside = q.0 >= region.x0 as f64
                    && q.0 <= region.x1 as f64
                    && q.1 >= region.y0 as f64
                    && q.1 <= region.y1 as f64;
                if inside {
                    q
                } else {
                    p
                }
            }
            None if x_lo < x_hi && y_lo < y_hi => (0.5 * (x_lo + x_hi) as f64, 0.5 * (y_lo + y_hi) as f64),
            None => {
                let n = members.len() as f64;
                (
                    xs.map(|x| x as f64 + 0.5 * f64::from(bw)).sum::<f64>() / n,
                    ys.map(|y| y as f64 + 0.5 * f64::from(bh)).sum::<f64>() / n,
                )
            }
        };
        points.push((cx, cy, members.len()));
    }

    let mut merged: Vec<(f64, f64, usize)> = Vec::new();
    for (cx, cy, n) in points {
        match merged.iter_mut().find(|m| (m.0 - cx).hypot(m.1 - cy) <= 3.0) {
            Some(m) => {
                let total = (m.2 + n) as f64;
                m.0 = (m.0 * m.2 as f64 + cx * n as f64) / total;
                m.1 = (m.1 * m.2 as f64 + cy * n as f64) / total;
                m.2 += n;
            }
            None => merged.push((cx, cy, n)),
        }
    }
    merged
        .into_iter()
        .map(|(cx, cy, _)| (spec.sigma_min + cx * spec.pixel_width(), spec.t_max - cy * spec.pixel_height()))
        .collect()
}

struct Region {
    x0: usize,
    x1: usize,
    y0: usize,
    y1: usize,
}

/// Which sign changes between two quadrants: (real part, imaginary part).
fn sign_changes(a: Quadrant, b: Quadrant) -> (bool, bool) {
    use Quadrant::*;
    match (a, b) {
        _ if a == b => (false, false),
        (Q1, Q2) | (Q2, Q1) | (Q3, Q4) | (Q4, Q3) => (true, false),
        (Q1, Q4) | (Q4, Q1) | (Q2, Q3) | (Q3, Q2) => (false, true),
        _ => (true, true),
    }
}

/// Centroid, unit direction and rms perpendicular residual.
type LineFit = ((f64, f64), (f64, f64), f64);

/// Line through points by principal axes.
fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx + syy == 0.0 {
        return None;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let d = (theta.cos(), theta.sin());
    let rms = (points.iter().map(|&(x, y)| ((x - mx) * d.1 - (y - my) * d.0).powi(2)).sum::<f64>() / n).sqrt();
    Some(((mx, my), d, rms))
}

/// Intersection of the fitted zero sets of the real and imaginary parts,
/// located from colour transitions along rows and columns of the region.
fn crossing_point(quads: &[Option<Quadrant>], w: usize, r: &Region) -> Option<(f64, f64)> {
    let mut re_pts = Vec::new();
    let mut im_pts = Vec::new();
    let mut record = |a: Option<Quadrant>, b: Option<Quadrant>, at: (f64, f64)| {
        if let (Some(a), Some(b)) = (a, b) {
            let (re, im) = sign_changes(a, b);
            if re {
                re_pts.push(at);
            }
            if im {
                im_pts.push(at);
            }
        }
    };
    for y in r.y0..r.y1 {
        for x in r.x0..r.x1 - 1 {
            record(quads[y * w + x], quads[y * w + x + 1], ((x + 1) as f64, y as f64 + 0.5));
        }
    }
    for x in r.x0..r.x1 {
        for y in r.y0..r.y1 - 1 {
            record(quads[y * w + x], quads[(y + 1) * w + x], (x as f64 + 0.5, (y + 1) as f64));
        }
    }
    let (p1, d1, e1) = fit_line(&re_pts)?;
    let (p2, d2, e2) = fit_line(&im_pts)?;
    let cross = d1.0 * d2.1 - d1.1 * d2.0;
    if e1 > 1.0 || e2 > 1.0 || cross.abs() < 1e-6 {
        return None;
    }
    let u = ((p2.0 - p1.0) * d2.1 - (p2.1 - p1.1) * d2.0) / cross;
    let (x, y) = (p1.0 + u * d1.0, p1.1 + u * d1.1);
    let inside = x >= r.x0 as f64 && x <= r.x1 as f64 && y >= r.y0 as f64 && y <= r.y1 as f64;
    inside.then_some((x, y))
}

/// Refits on a neighbourhood centred on the current estimate, smaller than a
/// detection block, so curvature from nearby points drops out.
fn refine_crossing(
    quads: &[Option<Quadrant>],
    w: usize,
    h: usize,
    mut p: (f64, f64),
    (bw, bh): (u32, u32),
) -> (f64, f64) {
    let (rx, ry) = (0.3 * f64::from(bw), 0.75 * f64::from(bh));
    for _ in 0..4 {
        let region = Region {
            x0: (p.0 - rx).floor().max(0.0) as usize,
            x1: ((p.0 + rx).ceil() as usize).min(w),
            y0: (p.1 - ry).floor().max(0.0) as usize,
            y1: ((p.1 + ry).ceil() as usize).min(h),
        };
        if region.x1 < region.x0 + 2 || region.y1 < region.y0 + 2 {
            break;
        }
        match crossing_point(quads, w, &region) {
            Some(q) if (q.0 - p.0).abs() < 0.25 && (q.1 - p.1).abs() < 0.25 => return q,
            Some(q) => p = q,
            None => break,
        }
    }
    p
}

/// Binary PPM (P6) encoding.
pub fn encode_ppm<W: Write>(grid: &PixelGrid, mut out: W) -> Result<()> {
    write!(out, "P6\n{} {}\n255\n", grid.width, grid.height)?;
    out.write_all(&grid.pixels)?;
    Ok(())
}

pub fn write_ppm(grid: &PixelGrid, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    encode_ppm(grid, &mut out)?;
    out.flush()?;
    Ok(())
}
