//! Index conventions shared by the group families.

use crate::error::{Error, Result};

/// `0, 1, -1, 2, -2, ...`
pub fn zigzag(i: u64) -> i64 {
    if i % 2 == 1 {
        (i / 2 + 1) as i64
    } else {
        -((i / 2) as i64)
    }
}

pub fn zigzag_index(n: i64) -> Result<u64> {
    let m = n.unsigned_abs();
    let idx = if n > 0 {
        m.checked_mul(2).map(|x| x - 1)
    } else {
        m.checked_mul(2)
    };
    idx.ok_or_else(|| Error::Encoding(format!("{n} has no representable enumeration index")))
}

/// Cantor pairing `N -> N x N`: `(0,0), (1,0), (0,1), (2,0), (1,1), ...`
pub fn unpair(n: u64) -> (u64, u64) {
    let n = n as u128;
    let mut w = ((8 * n + 1) as f64).sqrt() as u128;
    // float estimate, corrected below to the largest w with w(w+1)/2 <= n
    w = w.saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= n {
        w += 1;
    }
    while w * (w + 1) / 2 > n {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let b = n - t;
    let a = w - b;
    (a as u64, b as u64)
}

pub fn pair(a: u64, b: u64) -> Result<u64> {
    let w = a as u128 + b as u128;
    let idx = w * (w + 1) / 2 + b as u128;
    u64::try_from(idx).map_err(|_| Error::Encoding("enumeration index overflows u64".into()))
}
