//! The von Mangoldt function Λ(n) on [1, N] backed by a segmented sieve,
//! the Chebyshev function ψ, and short-interval deviation scans.

use crate::error::{Error, Result};
use crate::sum;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sieve segment size in entries (design: cache-friendly, bounds memory).
pub const SEGMENT_SIZE: u64 = 1 << 22;

const CACHE_MAGIC: &[u8; 4] = b"MGT1";

/// Sieved values of Λ(n): the positions n = p^k ≤ limit together with
/// λ = log p. Entries are strictly ascending in n.
#[derive(Debug, Clone)]
pub struct MangoldtTable {
    limit: u64,
    ns: Vec<u64>,
    lambdas: Vec<f64>,
    log_ns: Vec<f64>,
}

impl MangoldtTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.ns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ns.is_empty()
    }

    /// Prime-power positions, ascending.
    pub fn positions(&self) -> &[u64] {
        &self.ns
    }

    /// λ values aligned with [`positions`](Self::positions).
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// ln(n) per entry, aligned with [`positions`](Self::positions).
    pub fn log_positions(&self) -> &[f64] {
        &self.log_ns
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.ns.iter().copied().zip(self.lambdas.iter().copied())
    }

    /// Index of the first entry with n > x.
    pub fn partition_at(&self, x: f64) -> usize {
        self.ns.partition_point(|&n| (n as f64) <= x)
    }

    /// Λ(n) for a single n (binary search; 0 off the prime powers).
    pub fn lambda(&self, n: u64) -> f64 {
        match self.ns.binary_search(&n) {
            Ok(i) => self.lambdas[i],
            Err(_) => 0.0,
        }
    }
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Primes in [lo, hi) marked against `base` (primes up to sqrt(hi)).
fn sieve_segment(base: &[u64], lo: u64, hi: u64) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut start = lo.div_ceil(p) * p;
        if start < p * p {
            start = p * p;
        }
        let mut q = start;
        while q < hi {
            composite[(q - lo) as usize] = true;
            q += p;
        }
    }
    let mut out = Vec::new();
    for (i, &c) in composite.iter().enumerate() {
        let n = lo + i as u64;
        if n >= 2 && !c {
            out.push(n);
        }
    }
    out
}

/// Build the Λ table up to `limit` with a segmented sieve. Segments are
/// processed independently (in parallel when enabled) and merged in
/// ascending order, so the output is deterministic.
pub fn build_mangoldt(limit: u64) -> Result<MangoldtTable> {
    if limit < 2 {
        return Err(Error::Domain(format!(
            "sieve limit must be at least 2, got {limit}"
        )));
    }
    let root = (limit as f64).sqrt() as u64 + 2;
    let base = simple_sieve(root.max(3));

    let n_segments = (limit + 1).div_ceil(SEGMENT_SIZE);
    let segment = |s: u64| -> Vec<u64> {
        let lo = s * SEGMENT_SIZE;
        let hi = ((s + 1) * SEGMENT_SIZE).min(limit + 1);
        sieve_segment(&base, lo.max(2), hi)
    };

    #[cfg(feature = "parallel")]
    let per_segment: Vec<Vec<u64>> = (0..n_segments).into_par_iter().map(segment).collect();
    #[cfg(not(feature = "parallel"))]
    let per_segment: Vec<Vec<u64>> = (0..n_segments).map(segment).collect();

    let prime_count: usize = per_segment.iter().map(Vec::len).sum();

    // higher powers p^k <= limit, with log recomputed from the base prime
    let mut powers: Vec<(u64, f64)> = Vec::new();
    for &p in &base {
        if p > limit {
            break;
        }
        let lp = (p as f64).ln();
        let mut q = p;
        while q <= limit / p {
            q *= p;
            powers.push((q, lp));
        }
    }
    powers.sort_unstable_by_key(|&(n, _)| n);

    let total = prime_count + powers.len();
    let mut ns: Vec<u64> = Vec::new();
    let mut lambdas: Vec<f64> = Vec::new();
    let mut log_ns: Vec<f64> = Vec::new();
    let bytes = total * (8 + 8 + 8);
    ns.try_reserve(total).map_err(|_| {
        Error::Resource(format!("allocating {bytes} bytes for {total} sieve entries"))
    })?;
    lambdas.try_reserve(total).map_err(|_| {
        Error::Resource(format!("allocating {bytes} bytes for {total} sieve entries"))
    })?;
    log_ns.try_reserve(total).map_err(|_| {
        Error::Resource(format!("allocating {bytes} bytes for {total} sieve entries"))
    })?;

    // merge primes (ascending across segments) with the sorted power list
    let mut pw = powers.into_iter().peekable();
    for seg in &per_segment {
        for &p in seg {
            while let Some(&(q, lq)) = pw.peek() {
                if q < p {
                    ns.push(q);
                    lambdas.push(lq);
                    log_ns.push((q as f64).ln());
                    pw.next();
                } else {
                    break;
                }
            }
            ns.push(p);
            lambdas.push((p as f64).ln());
            log_ns.push((p as f64).ln());
        }
    }
    for (q, lq) in pw {
        ns.push(q);
        lambdas.push(lq);
        log_ns.push((q as f64).ln());
    }

    Ok(MangoldtTable {
        limit,
        ns,
        lambdas,
        log_ns,
    })
}

/// ψ(x) = Σ_{n ≤ x} Λ(n), compensated and deterministic.
pub fn psi(x: f64, table: &MangoldtTable) -> Result<f64> {
    if x < 1.0 {
        return Err(Error::Domain(format!("psi requires x >= 1, got {x}")));
    }
    if x > table.limit as f64 {
        return Err(Error::Range(format!(
            "psi({x}) exceeds the sieve limit {}",
            table.limit
        )));
    }
    let k = table.partition_at(x);
    let lambdas = &table.lambdas[..k];
    Ok(sum::sum_indexed(k, &|i| lambdas[i]))
}

/// ψ(x + δx) − ψ(x) − δx, computed directly from the window entries.
pub fn short_interval_deviation(x: f64, delta: f64, table: &MangoldtTable) -> Result<f64> {
    if x < 2.0 {
        return Err(Error::Domain(format!("window start must be >= 2, got {x}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    let hi = x * (1.0 + delta);
    if hi > table.limit as f64 {
        return Err(Error::Range(format!(
            "window [{x}, {hi}] exceeds the sieve limit {}",
            table.limit
        )));
    }
    let a = table.partition_at(x);
    let b = table.partition_at(hi);
    let lambdas = &table.lambdas[a..b];
    let s = sum::sum_indexed(b - a, &|i| lambdas[i]);
    Ok(s - delta * x)
}

/// One row of an [`omega_scan`] report.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct ScanPoint {
    pub x: f64,
    pub delta: f64,
    /// (ψ(x+δx) − ψ(x) − δx) / (δx · log(δ⁻¹ + 2))^{1/2}
    pub normalized_deviation: f64,
}

/// Normalized short-interval deviations on a geometric x-grid, sorted by
/// |deviation| descending. Purely diagnostic: the asymptotic ranges where
/// the deviation provably exceeds any constant are unreachable at desk
/// scale, which the CLI report header states.
pub fn omega_scan<D: Fn(f64) -> f64>(
    x_min: f64,
    x_max: f64,
    delta_rule: D,
    ratio: f64,
    table: &MangoldtTable,
) -> Result<Vec<ScanPoint>> {
    if !(x_min >= 2.0 && x_min < x_max) {
        return Err(Error::Domain(format!(
            "need 2 <= x_min < x_max, got [{x_min}, {x_max}]"
        )));
    }
    if !(ratio > 1.0) {
        return Err(Error::Domain(format!("grid ratio must exceed 1, got {ratio}")));
    }
    let mut points = Vec::new();
    let mut x = x_min;
    while x <= x_max {
        let delta = delta_rule(x);
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::Domain(format!(
                "delta rule returned {delta} at x = {x}, outside (0, 1]"
            )));
        }
        let dev = short_interval_deviation(x, delta, table)?;
        let norm = (delta * x * (1.0 / delta + 2.0).ln()).sqrt();
        points.push(ScanPoint {
            x,
            delta,
            normalized_deviation: dev / norm,
        });
        x *= ratio;
    }
    if points.is_empty() {
        return Err(Error::Domain("empty scan grid".into()));
    }
    points.sort_by(|a, b| {
        b.normalized_deviation
            .abs()
            .total_cmp(&a.normalized_deviation.abs())
            .then(a.x.total_cmp(&b.x))
    });
    Ok(points)
}

/// Write the binary sieve cache: magic "MGT1", u64 limit, u64 count, then
/// (u64 n, f64 lambda) pairs, all little-endian.
pub fn write_cache(path: &Path, table: &MangoldtTable) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&table.limit.to_le_bytes())?;
    w.write_all(&(table.ns.len() as u64).to_le_bytes())?;
    for i in 0..table.ns.len() {
        w.write_all(&table.ns[i].to_le_bytes())?;
        w.write_all(&table.lambdas[i].to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Read a cache produced by [`write_cache`].
pub fn read_cache(path: &Path) -> Result<MangoldtTable> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::Format {
            line: 0,
            msg: format!("bad cache magic {magic:?}, expected {CACHE_MAGIC:?}"),
        });
    }
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf8)?;
    let limit = u64::from_le_bytes(buf8);
    r.read_exact(&mut buf8)?;
    let count = u64::from_le_bytes(buf8) as usize;
    let mut ns = Vec::with_capacity(count);
    let mut lambdas = Vec::with_capacity(count);
    let mut log_ns = Vec::with_capacity(count);
    let mut prev = 0u64;
    for i in 0..count {
        r.read_exact(&mut buf8)?;
        let n = u64::from_le_bytes(buf8);
        r.read_exact(&mut buf8)?;
        let lambda = f64::from_le_bytes(buf8);
        if n <= prev {
            return Err(Error::Format {
                line: i + 1,
                msg: format!("cache entries not strictly ascending at n = {n}"),
            });
        }
        prev = n;
        ns.push(n);
        lambdas.push(lambda);
        log_ns.push((n as f64).ln());
    }
    Ok(MangoldtTable {
        limit,
        ns,
        lambdas,
        log_ns,
    })
}

/// Read a line-oriented list of primes for tests.
#[allow(dead_code)]
fn parse_prime_list<R: Read>(r: R) -> Vec<u64> {
    BufReader::new(r)
        .lines()
        .map_while(|l| l.ok())
        .filter_map(|l| l.trim().parse().ok())
        .collect()
}
