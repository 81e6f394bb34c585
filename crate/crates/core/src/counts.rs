//! Measurement counts for exhaustive and clustered screening.

use serde::Serialize;

/// `C(n, k)`, or `None` if an intermediate product overflows `u128`.
pub fn checked_binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Panics on overflow; see [`checked_binomial`].
pub fn binomial(n: usize, k: usize) -> u128 {
    checked_binomial(n, k).expect("binomial overflows u128")
}

/// `B(n, t) = sum_{i<=t} C(n, i) 3^i`, the number of Paulis of weight `<= t`.
pub fn checked_sphere_count(n: usize, t: usize) -> Option<u128> {
    (0..=t.min(n)).try_fold(0u128, |acc, i| {
        let term = checked_binomial(n, i)?.checked_mul(3u128.checked_pow(i as u32)?)?;
        acc.checked_add(term)
    })
}

/// `N(n, t) = C(n, t) + 2t - 1`, the clustered decoder's measurement budget.
pub fn checked_clustered_count(n: usize, t: usize) -> Option<u128> {
    Some(checked_binomial(n, t)?.checked_add(2 * t as u128)?.saturating_sub(1))
}

/// Panics on overflow; see [`checked_sphere_count`].
pub fn sphere_count(n: usize, t: usize) -> u128 {
    checked_sphere_count(n, t).expect("sphere count overflows u128")
}

/// Panics on overflow; see [`checked_clustered_count`].
pub fn clustered_count(n: usize, t: usize) -> u128 {
    checked_clustered_count(n, t).expect("clustered count overflows u128")
}

/// Comparison of `B/N` with `(3n+1)/(n+1)` for `t = 1` and `3^t` for `t > 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioCheck {
    pub n: usize,
    pub t: usize,
    pub sphere_count: u128,
    pub clustered_count: u128,
    pub ratio: f64,
    pub lower_bound: f64,
    pub meets_bound: bool,
    pub note: Option<String>,
}

/// Panics on overflow; see [`checked_ratio_check`].
pub fn ratio_check(n: usize, t: usize) -> RatioCheck {
    checked_ratio_check(n, t).expect("counts overflow u128")
}

/// `None` when the counts or the cross-multiplied comparison overflow `u128`.
pub fn checked_ratio_check(n: usize, t: usize) -> Option<RatioCheck> {
    let b = checked_sphere_count(n, t)?;
    let c = checked_clustered_count(n, t)?;
    let ratio = if c == 0 { f64::INFINITY } else { b as f64 / c as f64 };
    let (lower_bound, meets_bound) = match t {
        0 => (1.0, true),
        // (3n+1)/(n+1) as an exact fraction
        1 => (
            (3 * n + 1) as f64 / (n + 1) as f64,
            b.checked_mul(n as u128 + 1)? >= (3 * n as u128 + 1).checked_mul(c)?,
        ),
        _ => {
            let factor = 3u128.checked_pow(t as u32)?;
            (factor as f64, b >= factor.checked_mul(c)?)
        }
    };
    let note = if t == 0 {
        Some("t = 0: N(n,0) = 0, nothing to screen".to_string())
    } else if !meets_bound {
        Some(format!(
            "bound violated; no code with K >= 2 corrects {t} errors on {n} qubits (needs n >= {})",
            4 * t + 1
        ))
    } else {
        None
    };
    Some(RatioCheck {
        n,
        t,
        sphere_count: b,
        clustered_count: c,
        ratio,
        lower_bound,
        meets_bound,
        note,
    })
}
