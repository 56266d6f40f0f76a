use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StirlingKind {
    /// Unsigned Stirling numbers of the first kind: permutations of `n`
    /// with `k` cycles.
    FirstUnsigned,
    /// Stirling numbers of the second kind: set partitions of `n` into `k`
    /// blocks.
    Second,
}

static FIRST: RwLock<Vec<Vec<BigInt>>> = RwLock::new(Vec::new());
static SECOND: RwLock<Vec<Vec<BigInt>>> = RwLock::new(Vec::new());

fn lookup(table: &RwLock<Vec<Vec<BigInt>>>, n: u32, k: u32, second: bool) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    if let Some(row) = table.read().unwrap().get(n) {
        return row[k].clone();
    }
    let mut rows = table.write().unwrap();
    if rows.is_empty() {
        rows.push(vec![BigInt::one()]);
    }
    while rows.len() <= n {
        let m = rows.len();
        let prev = &rows[m - 1];
        let mut row = vec![BigInt::zero(); m + 1];
        for j in 1..=m {
            let diag = &prev[j - 1];
            let same = if j < m { prev[j].clone() } else { BigInt::zero() };
            let factor = if second { j } else { m - 1 };
            row[j] = diag + same * BigInt::from(factor);
        }
        rows.push(row);
    }
    rows[n][k].clone()
}

pub fn stirling(kind: StirlingKind, n: u32, k: u32) -> BigInt {
    match kind {
        StirlingKind::FirstUnsigned => lookup(&FIRST, n, k, false),
        StirlingKind::Second => lookup(&SECOND, n, k, true),
    }
}

pub fn stirling_first(n: u32, k: u32) -> BigInt {
    stirling(StirlingKind::FirstUnsigned, n, k)
}

pub fn stirling_second(n: u32, k: u32) -> BigInt {
    stirling(StirlingKind::Second, n, k)
}
