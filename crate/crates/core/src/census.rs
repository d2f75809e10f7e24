//! Main terms of the zero-counting functions, counted-versus-main comparisons,
//! the doubling identity `N_zeta(2T) = N_zeta(T) + N_beta(T)`, zero/pole
//! pairing between phase-zero lines, and catalog persistence.

use crate::contours::PhasePath;
use crate::critical::{find_zeros, singular_points_delta5, CriticalPoint, PointSource, SingularKind, ZeroSource};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub const FORMAT_VERSION: u64 = 1;
const MAX_REFINED_TO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogSource {
    Zeta,
    Beta,
    Delta5Merged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCatalog {
    pub source: CatalogSource,
    pub t_max: f64,
    pub entries: Vec<CriticalPoint>,
    pub scan_step: f64,
    pub tolerance: f64,
    /// Seconds since the Unix epoch at generation.
    pub timestamp: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionReport {
    pub t: f64,
    pub main_term: f64,
    pub counted: usize,
    pub residual: f64,
}

impl DistributionReport {
    fn new(t: f64, main_term: f64, counted: usize) -> Self {
        DistributionReport { t, main_term, counted, residual: counted as f64 - main_term }
    }
}

fn main_term(t: f64, log_constant: f64) -> f64 {
    t / TAU * t.ln() - t / TAU * (1.0 + log_constant)
}

/// `(t / 2 pi) log t - (t / 2 pi)(1 + log 2 pi)`.
pub fn n_zeta_main(t: f64) -> f64 {
    main_term(t, TAU.ln())
}

/// `(t / 2 pi) log t - (t / 2 pi)(1 + log(pi / 2))`.
pub fn n_beta_main(t: f64) -> f64 {
    main_term(t, FRAC_PI_2.ln())
}

/// `(t / 2 pi) log t - (t / 2 pi)(1 + log(2 pi / q))`.
pub fn n_lq_main(q: u32, t: f64) -> f64 {
    main_term(t, (TAU / f64::from(q)).ln())
}

impl ZeroCatalog {
    /// Scan the critical line up to `t_max` and collect the catalog.
    pub fn generate(source: CatalogSource, t_max: f64, scan_step: f64) -> Result<Self> {
        let entries = match source {
            CatalogSource::Zeta => find_zeros(ZeroSource::Zeta, 0.0, t_max, scan_step)?,
            CatalogSource::Beta => find_zeros(ZeroSource::Beta, 0.0, t_max, scan_step)?,
            CatalogSource::Delta5Merged => singular_points_delta5(0.0, t_max, scan_step)?,
        };
        let tolerance = entries.iter().map(|p| p.refined_to).fold(0.0, f64::max);
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Ok(ZeroCatalog { source, t_max, entries, scan_step, tolerance, timestamp })
    }

    fn require(&self, need: f64) -> Result<()> {
        if self.t_max < need {
            return Err(Error::CatalogTooShort { have: self.t_max, need });
        }
        Ok(())
    }

    /// Entries with `t <= bound` and the given source.
    pub fn count_up_to(&self, source: PointSource, bound: f64) -> usize {
        self.entries.iter().filter(|p| p.source == source && p.t <= bound).count()
    }
}

/// Counted `N_zeta(2T)` against counted `N_zeta(T) + N_beta(T)`, each with its
/// main term. Both counts include points at `t <= bound`.
pub fn census_identity_check(
    t: f64,
    zeta: &ZeroCatalog,
    beta: &ZeroCatalog,
) -> Result<(DistributionReport, DistributionReport)> {
    if !(t > 0.0) {
        return Err(Error::DomainError(format!("census ordinate must be positive, got {t}")));
    }
    zeta.require(2.0 * t)?;
    beta.require(t)?;
    let doubled = zeta.count_up_to(PointSource::ZetaZero, 2.0 * t);
    let split = zeta.count_up_to(PointSource::ZetaZero, t) + beta.count_up_to(PointSource::BetaZero, t);
    Ok((
        DistributionReport::new(2.0 * t, n_zeta_main(2.0 * t), doubled),
        DistributionReport::new(t, n_zeta_main(t) + n_beta_main(t), split),
    ))
}

/// Counted zeros against the main term at `t`.
pub fn distribution_report(catalog: &ZeroCatalog, t: f64) -> Result<DistributionReport> {
    catalog.require(t)?;
    let (main, source) = match catalog.source {
        CatalogSource::Zeta => (n_zeta_main(t), PointSource::ZetaZero),
        CatalogSource::Beta => (n_beta_main(t), PointSource::BetaZero),
        CatalogSource::Delta5Merged => {
            return Err(Error::DomainError("distribution reports need a zeta or beta catalog".into()))
        }
    };
    Ok(DistributionReport::new(t, main, catalog.count_up_to(source, t)))
}

fn terminus(traces: &[PhasePath], n: u32) -> Result<f64> {
    traces
        .iter()
        .find(|p| p.anchor_index == n)
        .map(|p| p.terminus_point.map_or(p.terminus_t, |c| c.t))
        .ok_or(Error::MissingTrace(n))
}

/// Zeros and poles of a merged catalog lying strictly between the termini of
/// phase lines `n` and `n + 1`; `n = 0` means the interval below line 1.
pub fn pairs_between_phase_lines(n: u32, catalog: &ZeroCatalog, traces: &[PhasePath]) -> Result<(usize, usize)> {
    let lo = if n == 0 { 0.0 } else { terminus(traces, n)? };
    let hi = terminus(traces, n + 1)?;
    catalog.require(hi)?;
    let inside = catalog.entries.iter().filter(|p| lo < p.t && p.t < hi);
    Ok(inside.fold((0, 0), |(z, p), c| match c.kind {
        SingularKind::Zero => (z + 1, p),
        SingularKind::Pole => (z, p + 1),
    }))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format_version: u64,
    source: CatalogSource,
    t_max: f64,
    scan_step: f64,
    tolerance: f64,
    timestamp: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    t: f64,
    kind: SingularKind,
    source: PointSource,
    multiplicity: u32,
    refined_to: f64,
}

/// 17 significant digits, a valid JSON number.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn name<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("unit enum serializes")
}

/// Write the catalog as JSON lines: one header record, then one record per entry.
pub fn write_catalog<W: Write>(catalog: &ZeroCatalog, mut out: W) -> Result<()> {
    writeln!(
        out,
        "{{\"format_version\":{FORMAT_VERSION},\"source\":{},\"t_max\":{},\"scan_step\":{},\"tolerance\":{},\"timestamp\":{}}}",
        name(&catalog.source),
        num(catalog.t_max),
        num(catalog.scan_step),
        num(catalog.tolerance),
        catalog.timestamp
    )?;
    for p in &catalog.entries {
        writeln!(
            out,
            "{{\"t\":{},\"kind\":{},\"source\":{},\"multiplicity\":{},\"refined_to\":{}}}",
            num(p.t),
            name(&p.kind),
            name(&p.source),
            p.multiplicity,
            num(p.refined_to)
        )?;
    }
    Ok(())
}

pub fn save_catalog(catalog: &ZeroCatalog, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_catalog(catalog, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Parse a JSON-lines catalog.
pub fn read_catalog<R: BufRead>(input: R) -> Result<ZeroCatalog> {
    let corrupt = |line: usize, reason: String| Error::CorruptRecord { line, reason };
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| corrupt(1, "missing header".into()))?;
    let first = first?;
    let raw: serde_json::Value = serde_json::from_str(&first).map_err(|e| corrupt(1, e.to_string()))?;
    match raw.get("format_version").map(serde_json::Value::as_u64) {
        Some(Some(FORMAT_VERSION)) => {}
        Some(Some(found)) => return Err(Error::FormatVersionMismatch { found, expected: FORMAT_VERSION }),
        _ => return Err(corrupt(1, "header lacks an integer format_version".into())),
    }
    let header: Header = serde_json::from_value(raw).map_err(|e| corrupt(1, e.to_string()))?;
    let mut entries: Vec<CriticalPoint> = Vec::new();
    for (number, line) in lines {
        let line = line?;
        let r: Record = serde_json::from_str(&line).map_err(|e| corrupt(number, e.to_string()))?;
        if (r.kind == SingularKind::Pole) != (r.source == PointSource::HalfZetaZero) {
            return Err(corrupt(number, "kind does not match source".into()));
        }
        if !(r.refined_to <= MAX_REFINED_TO) || r.multiplicity == 0 {
            return Err(corrupt(number, "entry is not a refined simple point".into()));
        }
        if entries.last().is_some_and(|p| p.t >= r.t) {
            return Err(corrupt(number, "entries not strictly ascending".into()));
        }
        entries.push(CriticalPoint {
            t: r.t,
            kind: r.kind,
            source: r.source,
            multiplicity: r.multiplicity,
            refined_to: r.refined_to,
        });
    }
    Ok(ZeroCatalog {
        source: header.source,
        t_max: header.t_max,
        entries,
        scan_step: header.scan_step,
        tolerance: header.tolerance,
        timestamp: header.timestamp,
    })
}

pub fn load_catalog(path: &Path) -> Result<ZeroCatalog> {
    read_catalog(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn main_term_values() {
        assert!(n_zeta_main(TAU * E).abs() < 1e-12);
        assert!((n_zeta_main(2.0 * TAU * E) - 2.0 * E * 2f64.ln()).abs() < 1e-12);
        assert!((n_zeta_main(60.0) - 11.998_380_767_573_718).abs() < 1e-12);
        assert!(n_beta_main(PI * E / 2.0).abs() < 1e-12);
        assert!((n_beta_main(30.0) - 9.308_724_386_076_634).abs() < 1e-12);
        assert!(n_lq_main(3, TAU * E / 3.0).abs() < 1e-12);
        assert!(n_lq_main(3, 30.0) < n_beta_main(30.0));
    }

    #[test]
    fn main_term_doubling() {
        for t in [10.0, 25.0, 50.0] {
            assert!((n_zeta_main(2.0 * t) - n_zeta_main(t) - n_beta_main(t)).abs() < 1e-10);
            assert!((n_lq_main(4, t) - n_beta_main(t)).abs() < 1e-12);
        }
    }

    fn point(t: f64, kind: SingularKind, source: PointSource) -> CriticalPoint {
        CriticalPoint { t, kind, source, multiplicity: 1, refined_to: 1e-9 }
    }

    fn sample() -> ZeroCatalog {
        ZeroCatalog {
            source: CatalogSource::Delta5Merged,
            t_max: 8.0,
            entries: vec![
                point(6.020_948_904_697_597, SingularKind::Zero, PointSource::BetaZero),
                point(7.067_362_570_867_347, SingularKind::Pole, PointSource::HalfZetaZero),
            ],
            scan_step: 0.01,
            tolerance: 1e-9,
            timestamp: 1_700_000_000,
        }
    }

    #[test]
    fn jsonl_layout() {
        let mut buf = Vec::new();
        write_catalog(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("{\"format_version\":1,\"source\":\"delta5_merged\""));
        assert_eq!(
            lines[1],
            "{\"t\":6.0209489046975966e0,\"kind\":\"zero\",\"source\":\"beta_zero\",\"multiplicity\":1,\"refined_to\":1.0000000000000001e-9}"
        );
        let back = read_catalog(text.as_bytes()).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn read_errors() {
        let bad_version = "{\"format_version\":2,\"source\":\"zeta\",\"t_max\":1,\"scan_step\":0.01,\"tolerance\":0,\"timestamp\":0}\n";
        assert!(matches!(read_catalog(bad_version.as_bytes()), Err(Error::FormatVersionMismatch { found: 2, expected: 1 })));
        let mut buf = Vec::new();
        write_catalog(&sample(), &mut buf).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        text.truncate(text.len() - 20);
        assert!(matches!(read_catalog(text.as_bytes()), Err(Error::CorruptRecord { line: 3, .. })));
        assert!(matches!(read_catalog(&b""[..]), Err(Error::CorruptRecord { line: 1, .. })));
    }

    #[test]
    fn pairing_below_first_line() {
        let cat = sample();
        let path = PhasePath {
            anchor_index: 1,
            line_kind: crate::contours::LineKind::PhaseZero,
            points: Vec::new(),
            terminus_t: 6.0205,
            terminus_point: Some(cat.entries[0]),
        };
        assert_eq!(pairs_between_phase_lines(0, &cat, std::slice::from_ref(&path)).unwrap(), (0, 0));
        assert!(matches!(pairs_between_phase_lines(1, &cat, &[path]), Err(Error::MissingTrace(2))));
    }
}
