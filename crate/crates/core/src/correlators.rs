//! Witten-Kontsevich intersection numbers `<tau_{d_1} ... tau_{d_n}>_g`.
//!
//! Values come from the DVV (Virasoro) recursion, which removes the largest
//! index at every step. The anchors are `<tau_0^3>_0 = 1` and
//! `<tau_1>_1 = 1/24`. Results are memoized per `(g, sorted indices)` in a
//! thread-safe table. The engine is generic so the same recursion also runs
//! in `f64` for large genus scans.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{double_factorial, factorial, format_rational, parse_rational, Rational};
use crate::{Error, Result};

/// Environment variable naming an optional on-disk correlator cache.
pub const CACHE_ENV: &str = "MULTICURVE_CORRELATOR_CACHE";

/// Number type the recursion can run in.
pub trait Scalar: Clone + Send + Sync + 'static {
    fn zero_value() -> Self;
    fn from_int(n: &BigInt) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_zero_value(&self) -> bool;
}

impl Scalar for Rational {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn from_int(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        crate::exact::rat(n, d)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for f64 {
    fn zero_value() -> Self {
        0.0
    }
    fn from_int(n: &BigInt) -> Self {
        crate::exact::to_f64(&Rational::from_integer(n.clone()))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero_value(&self) -> bool {
        *self == 0.0
    }
}

/// Canonical key: genus and indices sorted in decreasing order.
pub type CorrelatorKey = (u32, Vec<u32>);

pub fn canonical_key(g: u32, d: &[u32]) -> CorrelatorKey {
    let mut v = d.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    (g, v)
}

fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// Memoizing evaluator of the DVV recursion. By default keys containing
/// `tau_0` or `tau_1` are reduced with the string and dilaton equations
/// first, which is much cheaper than the full recursion.
pub struct Correlators<T: Scalar> {
    cache: RwLock<HashMap<CorrelatorKey, T>>,
    reduce: bool,
}

impl<T: Scalar> Default for Correlators<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Correlators<T> {
    pub fn new() -> Self {
        Self {
            cache: RwLock::new(HashMap::new()),
            reduce: true,
        }
    }

    /// Engine that uses the DVV recursion alone, kept as an independent
    /// reference for the reduced one.
    pub fn dvv_only() -> Self {
        Self {
            cache: RwLock::new(HashMap::new()),
            reduce: false,
        }
    }

    /// `<tau_d>_g`. Zero unless `sum d = 3g-3+n`; an error for unstable
    /// `(g, n)`.
    pub fn get(&self, g: u32, d: &[u32]) -> Result<T> {
        if !is_stable(g, d.len()) {
            return Err(Error::Unstable { g, n: d.len() });
        }
        let (g, key) = canonical_key(g, d);
        Ok(self.eval(g, &key))
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    /// Snapshot of every cached entry with a nonzero value.
    pub fn entries(&self) -> Vec<(CorrelatorKey, T)> {
        let mut out: Vec<_> = self
            .cache
            .read()
            .unwrap()
            .iter()
            .filter(|(_, v)| !v.is_zero_value())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn insert(&self, key: CorrelatorKey, value: T) {
        self.cache.write().unwrap().entry(key).or_insert(value);
    }

    /// `d` must be sorted decreasingly.
    fn eval(&self, g: u32, d: &[u32]) -> T {
        let n = d.len();
        if !is_stable(g, n) {
            return T::zero_value();
        }
        let dim = 3 * g as i64 - 3 + n as i64;
        if d.iter().map(|&x| x as i64).sum::<i64>() != dim {
            return T::zero_value();
        }
        if g == 0 && n == 3 {
            return T::from_ratio(1, 1);
        }
        if g == 1 && n == 1 {
            return T::from_ratio(1, 24);
        }
        let key = (g, d.to_vec());
        if let Some(v) = self.cache.read().unwrap().get(&key) {
            return v.clone();
        }
        let value = match (self.reduce, d[n - 1]) {
            (true, 0) => self.string(g, d),
            (true, 1) => self.dilaton(g, d),
            _ => self.dvv(g, d),
        };
        self.insert(key, value.clone());
        value
    }

    /// `d` ends in 0.
    fn string(&self, g: u32, d: &[u32]) -> T {
        let rest = &d[..d.len() - 1];
        let mut total = T::zero_value();
        let mut j = 0;
        while j < rest.len() {
            let s = rest[j];
            let mut mult = 1;
            while j + mult < rest.len() && rest[j + mult] == s {
                mult += 1;
            }
            if s > 0 {
                let mut next = rest.to_vec();
                next[j + mult - 1] = s - 1;
                let v = self.eval(g, &next);
                total = total.add(&v.mul(&T::from_ratio(mult as i64, 1)));
            }
            j += mult;
        }
        total
    }

    /// `d` ends in 1 and has no zeros.
    fn dilaton(&self, g: u32, d: &[u32]) -> T {
        let rest = &d[..d.len() - 1];
        let factor = 2 * g as i64 - 2 + rest.len() as i64;
        self.eval(g, rest).mul(&T::from_ratio(factor, 1))
    }

    fn dvv(&self, g: u32, d: &[u32]) -> T {
        let k = d[0] as i64 - 1;
        let rest = &d[1..];
        let mut total = T::zero_value();

        // Merging tau_{k+1} into one of the other points; equal indices
        // give equal terms so each distinct value is done once.
        let mut j = 0;
        while j < rest.len() {
            let s = rest[j];
            let mut mult = 1;
            while j + mult < rest.len() && rest[j + mult] == s {
                mult += 1;
            }
            let coeff = double_factorial(2 * k + 2 * s as i64 + 1) / double_factorial(2 * s as i64 - 1)
                * BigInt::from(mult);
            let mut next: Vec<u32> = rest.to_vec();
            next[j] = s + k as u32;
            next.sort_unstable_by(|a, b| b.cmp(a));
            let v = self.eval(g, &next);
            if !v.is_zero_value() {
                total = total.add(&v.mul(&T::from_int(&coeff)));
            }
            j += mult;
        }

        if k >= 1 {
            let mut half = T::zero_value();
            for r in 0..k {
                let s = k - 1 - r;
                let w = double_factorial(2 * r + 1) * double_factorial(2 * s + 1);
                let wt = T::from_int(&w);
                if g >= 1 {
                    let mut next: Vec<u32> = rest.to_vec();
                    next.push(r as u32);
                    next.push(s as u32);
                    next.sort_unstable_by(|a, b| b.cmp(a));
                    let v = self.eval(g - 1, &next);
                    if !v.is_zero_value() {
                        half = half.add(&v.mul(&wt));
                    }
                }
                let split = self.split_sum(g, r as u32, s as u32, rest);
                if !split.is_zero_value() {
                    half = half.add(&split.mul(&wt));
                }
            }
            total = total.add(&half.div(&T::from_ratio(2, 1)));
        }
        total.div(&T::from_int(&double_factorial(2 * k + 3)))
    }

    /// `sum over g1+g2=g and ordered splittings I|J of rest` of
    /// `<tau_r tau_I>_{g1} <tau_s tau_J>_{g2}`.
    fn split_sum(&self, g: u32, r: u32, s: u32, rest: &[u32]) -> T {
        let mut values: Vec<u32> = Vec::new();
        let mut mults: Vec<u32> = Vec::new();
        for &x in rest {
            if values.last() == Some(&x) {
                *mults.last_mut().unwrap() += 1;
            } else {
                values.push(x);
                mults.push(1);
            }
        }
        let mut take = vec![0u32; values.len()];
        let mut total = T::zero_value();
        loop {
            let size: u32 = take.iter().sum();
            let weight: u32 = take.iter().zip(&values).map(|(c, v)| c * v).sum();
            // dimension of the first factor fixes its genus
            let num = r as i64 + weight as i64 + 2 - size as i64;
            if num >= 0 && num % 3 == 0 && (num / 3) as u32 <= g {
                let g1 = (num / 3) as u32;
                let g2 = g - g1;
                let mut left = vec![r];
                let mut right = vec![s];
                let mut binom = BigInt::one();
                for (i, &c) in take.iter().enumerate() {
                    left.extend(std::iter::repeat_n(values[i], c as usize));
                    right.extend(std::iter::repeat_n(values[i], (mults[i] - c) as usize));
                    binom *= crate::exact::binomial(mults[i], c);
                }
                left.sort_unstable_by(|a, b| b.cmp(a));
                right.sort_unstable_by(|a, b| b.cmp(a));
                let a = self.eval(g1, &left);
                if !a.is_zero_value() {
                    let b = self.eval(g2, &right);
                    if !b.is_zero_value() {
                        total = total.add(&a.mul(&b).mul(&T::from_int(&binom)));
                    }
                }
            }
            // odometer over sub-multisets
            let mut i = 0;
            loop {
                if i == take.len() {
                    return total;
                }
                if take[i] < mults[i] {
                    take[i] += 1;
                    break;
                }
                take[i] = 0;
                i += 1;
            }
        }
    }
}

impl Correlators<Rational> {
    /// Writes one line `g d1,d2,... num den` per nonzero cached entry.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::Io(e.to_string()))?;
        let mut w = std::io::BufWriter::new(file);
        for ((g, d), v) in self.entries() {
            let idx: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{} {} {} {}", g, idx.join(","), v.numer(), v.denom())
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        Ok(())
    }

    /// Loads a cache file. Every entry containing `tau_0` or `tau_1` is
    /// checked against the string or dilaton equation evaluated by a fresh
    /// engine; any mismatch rejects the whole file.
    pub fn load(&self, path: &Path) -> Result<usize> {
        let file = std::fs::File::open(path).map_err(|e| Error::Io(e.to_string()))?;
        let mut parsed = Vec::new();
        for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::Io(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::Io(format!("{}:{}: malformed cache line", path.display(), lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(bad());
            }
            let g: u32 = fields[0].parse().map_err(|_| bad())?;
            let d: Vec<u32> = if fields[1] == "-" {
                Vec::new()
            } else {
                fields[1].split(',').map(|x| x.parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?
            };
            let v = parse_rational(&format!("{}/{}", fields[2], fields[3])).map_err(|_| bad())?;
            if !is_stable(g, d.len()) {
                return Err(bad());
            }
            parsed.push((canonical_key(g, &d), v));
        }
        let fresh = Correlators::<Rational>::dvv_only();
        for ((g, d), v) in &parsed {
            let expected = if d.contains(&0) {
                Some(string_rhs(&fresh, *g, d))
            } else if d.contains(&1) {
                Some(dilaton_rhs(&fresh, *g, d))
            } else {
                None
            };
            if let Some(Some(e)) = expected {
                if &e != v {
                    return Err(Error::Invariant(format!(
                        "cached <tau {:?}>_{} = {} fails the string/dilaton check",
                        d,
                        g,
                        format_rational(v)
                    )));
                }
            }
        }
        let count = parsed.len();
        for (key, v) in parsed {
            self.insert(key, v);
        }
        Ok(count)
    }
}

/// Right side of the string equation for an entry containing `tau_0`,
/// `None` when the reduced signature is unstable.
fn string_rhs(c: &Correlators<Rational>, g: u32, d: &[u32]) -> Option<Rational> {
    let pos = d.iter().position(|&x| x == 0)?;
    let mut rest = d.to_vec();
    rest.remove(pos);
    if !is_stable(g, rest.len()) {
        return None;
    }
    let mut acc = Rational::zero();
    for i in 0..rest.len() {
        if rest[i] > 0 {
            let mut e = rest.clone();
            e[i] -= 1;
            acc += c.get(g, &e).ok()?;
        }
    }
    Some(acc)
}

fn dilaton_rhs(c: &Correlators<Rational>, g: u32, d: &[u32]) -> Option<Rational> {
    let pos = d.iter().position(|&x| x == 1)?;
    let mut rest = d.to_vec();
    rest.remove(pos);
    if !is_stable(g, rest.len()) {
        return None;
    }
    let factor = 2 * g as i64 - 2 + rest.len() as i64;
    Some(c.get(g, &rest).ok()? * crate::exact::int(factor))
}

static GLOBAL: OnceLock<Correlators<Rational>> = OnceLock::new();
static GLOBAL_F64: OnceLock<Correlators<f64>> = OnceLock::new();

/// Shared exact engine. On first use it loads the cache file named by
/// [`CACHE_ENV`] when that variable is set and the file exists.
pub fn global() -> &'static Correlators<Rational> {
    GLOBAL.get_or_init(|| {
        let c = Correlators::new();
        if let Ok(p) = std::env::var(CACHE_ENV) {
            let path = Path::new(&p);
            if path.exists() {
                if let Err(e) = c.load(path) {
                    eprintln!("warning: ignoring correlator cache {}: {e}", path.display());
                    return Correlators::new();
                }
            }
        }
        c
    })
}

pub fn global_f64() -> &'static Correlators<f64> {
    GLOBAL_F64.get_or_init(Correlators::new)
}

/// `<tau_{d_1} ... tau_{d_n}>_g` exactly.
pub fn correlator(g: u32, d: &[u32]) -> Result<Rational> {
    global().get(g, d)
}

pub fn correlator_f64(g: u32, d: &[u32]) -> Result<f64> {
    global_f64().get(g, d)
}

/// Genus zero closed form `(n-3)! / prod d_i!`, zero off the dimension.
pub fn genus_zero(d: &[u32]) -> Result<Rational> {
    let n = d.len();
    if n < 3 {
        return Err(Error::Unstable { g: 0, n });
    }
    if d.iter().sum::<u32>() as usize != n - 3 {
        return Ok(Rational::zero());
    }
    let den: BigInt = d.iter().map(|&x| factorial(x)).product();
    Ok(Rational::new(factorial((n - 3) as u32), den))
}

/// Checks the string equation `<tau_0 tau_d>_g = sum_j <.. tau_{d_j - 1} ..>_g`.
pub fn string_equation_holds(g: u32, d: &[u32]) -> Result<bool> {
    let mut full = d.to_vec();
    full.push(0);
    let lhs = correlator(g, &full)?;
    match string_rhs(global(), g, &full) {
        Some(rhs) => Ok(lhs == rhs),
        None => Ok(true),
    }
}

/// Checks the dilaton equation `<tau_1 tau_d>_g = (2g-2+n) <tau_d>_g`.
pub fn dilaton_equation_holds(g: u32, d: &[u32]) -> Result<bool> {
    let mut full = d.to_vec();
    full.push(1);
    let lhs = correlator(g, &full)?;
    match dilaton_rhs(global(), g, &full) {
        Some(rhs) => Ok(lhs == rhs),
        None => Ok(true),
    }
}

/// Checks whichever of the string and dilaton equations apply to the key
/// `d` itself, that is, when it contains `tau_0` or `tau_1`. The left side
/// comes from the plain DVV engine, the right side from the shared one.
pub fn key_equations_hold(g: u32, d: &[u32]) -> Result<bool> {
    static PLAIN: OnceLock<Correlators<Rational>> = OnceLock::new();
    let lhs = PLAIN.get_or_init(Correlators::dvv_only).get(g, d)?;
    if d.contains(&0) {
        if let Some(rhs) = string_rhs(global(), g, d) {
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    if d.contains(&1) {
        if let Some(rhs) = dilaton_rhs(global(), g, d) {
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `epsilon(d) = <tau_d>_g prod (2d_i+1)!! g! 24^g / (6g-5+2n)!! - 1`.
pub fn epsilon(g: u32, d: &[u32]) -> Result<Rational> {
    let n = d.len();
    let dim = 3 * g as i64 - 3 + n as i64;
    let sum: u64 = d.iter().map(|&x| x as u64).sum();
    if sum as i64 != dim {
        return Err(Error::DimensionMismatch { got: sum, expected: dim });
    }
    let c = correlator(g, d)?;
    let mut num: BigInt = d.iter().map(|&x| double_factorial(2 * x as i64 + 1)).product();
    num *= factorial(g) * num_traits::pow(BigInt::from(24), g as usize);
    let den = double_factorial(6 * g as i64 - 5 + 2 * n as i64);
    Ok(c * Rational::new(num, den) - Rational::one())
}
