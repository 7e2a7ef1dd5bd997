//! The descent witness (τ, μ, τ′, μ′, i) and the invariant δ(n).
//!
//! For an odd graph G(n) with distinguished divisor d, write 2d = τ² + μ²
//! and 2n/d = τ′² + μ′², and let i be the square root of −1 mod n with
//! i ≡ τ/μ (mod d) and i ≡ τ′/μ′ (mod n/d). Then
//!
//!     δ(n) = [(τ + μi)/n] + [2/d]  ∈ F₂
//!
//! and δ(n) = 1 forces the reduced φ-Selmer group to be trivial, which is
//! the non-congruence certificate. δ(n) is independent of every
//! representation choice made along the way; the tests exercise that
//! exhaustively.

use crate::arithmetic::{
    bracket_symbol, crt, gcd, inv_mod, mul_mod, sqrt_minus_one, two_squares, FactoredInteger,
};
use crate::selmer::find_descent_divisor;
use crate::{Error, Result};

/// The complete witness for one δ(n) evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentData {
    pub d: u64,
    pub tau: u64,
    pub mu: u64,
    pub tau_prime: u64,
    pub mu_prime: u64,
    /// Square root of −1 modulo n determined by the congruences above.
    pub i: u64,
    pub delta: u8,
}

/// Combine the two-square data into the global square root of −1 and δ.
///
/// Factored out so invariance tests can drive it with non-canonical
/// representations and a swapped divisor.
pub fn descent_data_with(
    n: &FactoredInteger,
    d: u64,
    (tau, mu): (u64, u64),
    (tau_prime, mu_prime): (u64, u64),
) -> Result<DescentData> {
    let nv = n.value;
    let cofactor = nv / d;
    let i = crt(&[
        (residue_ratio(tau, mu, d)?, d),
        (residue_ratio(tau_prime, mu_prime, cofactor)?, cofactor),
    ])?;
    // Invariants of Definition 4.5; failures here mean an arithmetic bug.
    if mul_mod(i, i, nv) != nv - 1 {
        return Err(Error::InternalInconsistency(format!(
            "i² ≢ −1 mod {nv} for i = {i}"
        )));
    }
    if gcd(mu, d) != 1 || gcd(mu_prime, cofactor) != 1 {
        return Err(Error::InternalInconsistency(
            "μ not coprime to its modulus".into(),
        ));
    }
    let arg = (tau as u128 + mu as u128 * i as u128) % nv as u128;
    if gcd(arg as u64, nv) != 1 {
        return Err(Error::InternalInconsistency(format!(
            "τ + μi shares a factor with n = {nv}"
        )));
    }
    let delta = bracket_symbol(arg as i64, nv)? ^ bracket_symbol(2, d)?;
    Ok(DescentData {
        d,
        tau,
        mu,
        tau_prime,
        mu_prime,
        i,
        delta,
    })
}

/// τ/μ mod m (zero for the vacuous modulus 1).
fn residue_ratio(tau: u64, mu: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(0);
    }
    Ok(mul_mod(tau % m, inv_mod(mu % m, m)?, m))
}

/// Canonical descent data for admissible n with odd G(n).
pub fn compute_descent_data(n: &FactoredInteger) -> Result<DescentData> {
    let d = find_descent_divisor(n)?;
    let rep_d = two_squares(2 * d)?;
    let rep_cofactor = two_squares(2 * (n.value / d))?;
    descent_data_with(n, d, rep_d, rep_cofactor)
}

/// δ(n) ∈ F₂ (requires admissible n with odd graph).
pub fn delta(n: &FactoredInteger) -> Result<u8> {
    Ok(compute_descent_data(n)?.delta)
}

/// δ(n) recomputed from per-prime local terms.
///
/// t′_j = [(τ+μ·i_p)/p_j] for p_j | d and [2(τ+μ·i_p)/p_j] for p_j | n/d,
/// with i_p ≡ i (mod p_j) for the global i of Definition 4.5 (which already
/// satisfies i ≡ τ/μ at primes dividing d). The sum telescopes to δ(n)
/// because [2/d] = [2/(n/d)] when n ≡ 1 (mod 8).
pub fn delta_via_local_vector(n: &FactoredInteger) -> Result<(Vec<u8>, u8)> {
    let data = compute_descent_data(n)?;
    let mut terms = Vec::with_capacity(n.num_primes());
    for p in n.primes() {
        let i_p = data.i % p;
        let arg = (data.tau + mul_mod(data.mu % p, i_p, p)) % p;
        let term = if data.d % p == 0 {
            bracket_symbol(arg as i64, p)?
        } else {
            bracket_symbol((mul_mod(2, arg, p)) as i64, p)?
        };
        terms.push(term);
    }
    let sum = terms.iter().fold(0u8, |a, b| a ^ b);
    Ok((terms, sum))
}

/// δ(n) in the special case where every prime factor is ≡ 1 (mod 8):
/// d = 1, τ = μ = 1, so δ(n) = [(1 + i)/n] for any square root i of −1.
pub fn delta_li_tian(n: &FactoredInteger) -> Result<u8> {
    n.check_admissible()?;
    if n.primes().any(|p| p % 8 != 1) {
        return Err(Error::NotLiTianCase { n: n.value });
    }
    let parts: Vec<(u64, u64)> = n
        .primes()
        .map(|p| Ok((sqrt_minus_one(p)?, p)))
        .collect::<Result<_>>()?;
    let i = crt(&parts)?;
    debug_assert_eq!(mul_mod(i, i, n.value), n.value - 1);
    bracket_symbol(((1 + i as u128) % n.value as u128) as i64, n.value)
}

/// Corollary of δ(n) = 1: the reduced φ-Selmer group is trivial.
pub fn tilde_phi_selmer_trivial(n: &FactoredInteger) -> Result<bool> {
    Ok(delta(n)? == 1)
}
