//! Brute-force local solvability for the homogeneous spaces of the descent.
//!
//! This module is the trust anchor for the closed-form Selmer membership
//! tests: it decides solvability of `w² = A·t⁴ + B·z⁴` (and of the two-cover
//! system behind the reduced Selmer group) over ℝ and ℚ_p directly, by
//! valuation-branch recursion with Hensel-certified acceptance. It never
//! consults the closed forms in [`crate::selmer`].
//!
//! The engine hinges on three exact facts about ℤ_p:
//! * a unit is a square iff it is a QR mod p (odd p) or ≡ 1 mod 8 (p = 2);
//! * a simple root mod p (odd p) of `u_x + u_y·s⁴` lifts to an exact root,
//!   and at p = 2 the quartic unit set `(ℤ₂^×)⁴` is exactly `1 + 16ℤ₂`;
//! * values of weighted-homogeneous forms can be normalized so that the
//!   quartic variables are not both divisible by p.

use crate::arithmetic::{factorize, is_prime, mul_mod, pow_mod, FactoredInteger};
use crate::selmer::{SelmerElement, SelmerGroup};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalPlace {
    Real,
    Finite(u64),
}

/// The curve `w² = A·t⁴ + B·z⁴` with nonzero integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuarticForm {
    pub a: i128,
    pub b: i128,
}

impl QuarticForm {
    pub fn new(a: i128, b: i128) -> Self {
        assert!(a != 0 && b != 0, "quartic form needs nonzero coefficients");
        QuarticForm { a, b }
    }
}

/// 2e + 1 is the precision at which unit squares are recognized.
#[inline]
fn e_of(p: u64) -> u32 {
    if p == 2 {
        1
    } else {
        0
    }
}

/// (valuation, unit residue) of a nonzero integer: the unit is reduced
/// mod p for odd p and mod 2⁸ for p = 2.
fn split_valuation(x: i128, p: u64) -> (u32, u64) {
    debug_assert!(x != 0);
    let mut v = 0u32;
    let mut x = x;
    while x % p as i128 == 0 {
        x /= p as i128;
        v += 1;
    }
    let modulus = if p == 2 { 256 } else { p };
    (v, x.rem_euclid(modulus as i128) as u64)
}

fn is_square_unit(u: u64, p: u64) -> bool {
    if p == 2 {
        u % 8 == 1
    } else {
        pow_mod(u % p, (p - 1) / 2, p) == 1
    }
}

/// Is the nonzero integer a square in ℚ_p?
pub fn is_padic_square(x: i128, p: u64) -> bool {
    let (v, u) = split_valuation(x, p);
    v % 2 == 0 && is_square_unit(u, p)
}

/// Is the nonzero integer a fourth power in ℚ_p?
fn is_padic_fourth_power(x: i128, p: u64) -> bool {
    let (v, u) = split_valuation(x, p);
    if v % 4 != 0 {
        return false;
    }
    if p == 2 {
        // (ℤ₂^×)⁴ = 1 + 16ℤ₂
        u % 16 == 1
    } else {
        let g = if (p - 1) % 4 == 0 { 4 } else { 2 };
        pow_mod(u % p, (p - 1) / g, p) == 1
    }
}

/// Does `p^vx·u_x + p^vy·u_y·s⁴` take a square value (or 0) for some unit s?
///
/// Unit residues are mod p (odd p) or mod 2⁸ (p = 2). Acceptance and
/// rejection are both exact: the reachable value set is `c₀ + pℤ_p` (odd p,
/// both terms unit) resp. `c₀ + 16ℤ_p` (p = 2), and one-sided-valuation
/// cases have constant unit part at the decisive precision.
fn h_unit(vx: u32, ux: u64, vy: u32, uy: u64, p: u64) -> bool {
    let g = vx.min(vy);
    let dx = vx - g;
    let dy = vy - g;
    if p == 2 {
        let shl = |u: u64, s: u32| -> u64 {
            if s >= 8 {
                0
            } else {
                (u << s) % 256
            }
        };
        let c0 = (shl(ux, dx) + shl(uy, dy)) % 256;
        if dx == 0 && dy == 0 {
            // value set = c0 + 16ℤ₂
            if c0 % 16 == 0 {
                return true; // −ux/uy ∈ (ℤ₂^×)⁴, exact root, w = 0
            }
            let m = c0.trailing_zeros();
            let u0 = (c0 >> m) % 8;
            return match m {
                0 | 1 => (g + m) % 2 == 0 && u0 == 1,
                2 => g % 2 == 0 && (u0 == 1 || u0 == 5),
                // unit perturbation 2ℤ₂ reaches every odd class mod 8
                _ => (g + 3) % 2 == 0,
            };
        }
        // exactly one term is a unit: valuation g, unit class c0 mod 8 fixed
        g % 2 == 0 && c0 % 8 == 1
    } else {
        if dx == 0 && dy == 0 {
            for s in 1..p {
                let c = (ux + mul_mod(uy, pow_mod(s, 4, p), p)) % p;
                if c == 0 {
                    // simple root mod p lifts: the value 0 is attained
                    return true;
                }
                if g % 2 == 0 && is_square_unit(c, p) {
                    return true;
                }
            }
            false
        } else if dy == 0 {
            g % 2 == 0 && is_square_unit(uy, p)
        } else {
            g % 2 == 0 && is_square_unit(ux, p)
        }
    }
}

/// Does `x + y·s⁴` land in the p-adic squares (including 0) for some
/// s ∈ p^j0·ℤ_p?
fn h_solvable(x: i128, y: i128, j0: u32, p: u64) -> bool {
    let e = e_of(p);
    let (vx, ux) = split_valuation(x, p);
    let (vy0, uy) = split_valuation(y, p);
    let mut j = j0;
    // Once v(y·s⁴) > v(x) + 2e the y-term cannot disturb squareness of x,
    // and the tail (including s = 0) reduces to x itself being a square.
    while vy0 + 4 * j <= vx + 2 * e {
        if h_unit(vx, ux, vy0 + 4 * j, uy, p) {
            return true;
        }
        j += 1;
    }
    is_padic_square(x, p)
}

/// Local solvability of `w² = A·t⁴ + B·z⁴` with (t, z) ≠ (0, 0).
pub fn quartic_solvable_at(form: &QuarticForm, place: LocalPlace) -> Result<bool> {
    match place {
        LocalPlace::Real => Ok(form.a > 0 || form.b > 0),
        LocalPlace::Finite(p) => {
            if p > 1_000_000 {
                return Err(Error::TooLarge(format!("oracle prime {p} exceeds 10⁶")));
            }
            debug_assert!(is_prime(p));
            // z a unit (s = t/z ∈ ℤ_p), or t a unit and z ∈ pℤ_p.
            Ok(h_solvable(form.b, form.a, 0, p) || h_solvable(form.a, form.b, 1, p))
        }
    }
}

/// The places S = {∞} ∪ {2} ∪ {p | n}.
pub fn places(n: &FactoredInteger) -> Vec<LocalPlace> {
    let mut out = vec![LocalPlace::Real, LocalPlace::Finite(2)];
    out.extend(n.primes().map(LocalPlace::Finite));
    out
}

/// C_d: `d·w² = d²·t⁴ + 4n²·z⁴`, equivalently `w² = d·t⁴ + (4n²/d)·z⁴`.
fn cd_form(e: &SelmerElement, n: &FactoredInteger) -> QuarticForm {
    let d = e.value() as i128;
    let nn = n.value as i128;
    QuarticForm::new(d, 4 * nn * nn / d)
}

/// C′_d: `d·w² = d²·t⁴ − n²·z⁴`. For odd d this is `w² = d·t⁴ − (n²/d)·z⁴`;
/// for even d the coefficients stay integral as `(dw)² = d³·t⁴ − d·n²·z⁴`.
fn cdprime_form(e: &SelmerElement, n: &FactoredInteger) -> QuarticForm {
    let d = e.value() as i128;
    let nn = n.value as i128;
    if e.even {
        QuarticForm::new(d * d * d, -d * nn * nn)
    } else {
        QuarticForm::new(d, -(nn * nn) / d)
    }
}

/// Local solvability of C_d at every place of S.
pub fn cd_solvable_everywhere(e: &SelmerElement, n: &FactoredInteger) -> Result<bool> {
    let form = cd_form(e, n);
    for place in places(n) {
        if !quartic_solvable_at(&form, place)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Local solvability of C′_d at every place of S.
pub fn cdprime_solvable_everywhere(e: &SelmerElement, n: &FactoredInteger) -> Result<bool> {
    let form = cdprime_form(e, n);
    for place in places(n) {
        if !quartic_solvable_at(&form, place)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Candidate classes enumerated locally so the oracle stays independent of
/// the closed-form Selmer code paths.
fn positive_candidates(n: &FactoredInteger) -> Vec<SelmerElement> {
    let primes: Vec<u64> = n.primes().collect();
    let k = primes.len();
    let mut out = Vec::with_capacity(2 << k);
    for mask in 0u32..1 << k {
        let odd: u64 = primes
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .product();
        out.push(SelmerElement::new(1, false, odd));
        out.push(SelmerElement::new(1, true, odd));
    }
    out
}

fn all_candidates(n: &FactoredInteger) -> Vec<SelmerElement> {
    let mut out = Vec::new();
    for e in positive_candidates(n) {
        out.push(e);
        out.push(SelmerElement::new(-1, e.even, e.odd_part));
    }
    out
}

/// S^(φ) by pure local search over C_d.
pub fn phi_selmer_oracle(n: &FactoredInteger) -> Result<SelmerGroup> {
    n.check_admissible()?;
    let mut elements = Vec::new();
    for e in positive_candidates(n) {
        if cd_solvable_everywhere(&e, n)? {
            elements.push(e);
        }
    }
    Ok(SelmerGroup::from_elements(elements))
}

/// S^(ψ) by pure local search over C′_d.
pub fn psi_selmer_oracle(n: &FactoredInteger) -> Result<SelmerGroup> {
    n.check_admissible()?;
    let mut elements = Vec::new();
    for e in all_candidates(n) {
        if cdprime_solvable_everywhere(&e, n)? {
            elements.push(e);
        }
    }
    Ok(SelmerGroup::from_elements(elements))
}

// ---------------------------------------------------------------------------
// The two-cover system M_b:
//     w² = 2d·(t⁴ + (n/d)²·z⁴),   w − τ·t² − (n/d)·μ·z² = b·u²
// ---------------------------------------------------------------------------

/// Working precision for one prime: residues live mod p^cap (u64).
struct PadicCtx {
    p: u64,
    e: u32,
    cap: u32,
    pmod: u64,
    /// powers[i] = p^i for i ≤ cap
    powers: Vec<u64>,
}

impl PadicCtx {
    fn new(p: u64) -> Self {
        let mut powers = vec![1u64];
        while let Some(next) = powers.last().unwrap().checked_mul(p) {
            powers.push(next);
            if powers.len() > 63 {
                break;
            }
        }
        // stay one multiplication away from overflow headroom
        let cap = (powers.len() - 1) as u32;
        PadicCtx {
            p,
            e: e_of(p),
            cap,
            pmod: powers[cap as usize],
            powers,
        }
    }

    fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.pmod as i128) as u64
    }

    /// Valuation of a residue; `cap` stands for "≥ cap".
    fn v_of(&self, r: u64) -> u32 {
        if r == 0 {
            return self.cap;
        }
        let mut v = 0;
        let mut r = r;
        while r % self.p == 0 {
            r /= self.p;
            v += 1;
        }
        v
    }

    /// Square root of a square unit, to precision p^prec.
    fn sqrt_unit(&self, u: u64, prec: u32) -> u64 {
        if self.p == 2 {
            // bit-by-bit lift: after step j, w² ≡ u (mod 2^(j+1))
            let mut w = 1u64;
            for j in 3..prec {
                let mask = (1u128 << (j + 1)) - 1;
                if (w as u128 * w as u128) & mask != (u as u128) & mask {
                    w += 1 << (j - 1);
                }
            }
            w % self.powers[prec as usize]
        } else {
            let mut w = tonelli_sqrt_mod_p(u % self.p, self.p);
            let mut k = 1u32;
            while k < prec {
                let k2 = (2 * k).min(prec);
                let m = self.powers[k2 as usize];
                // Newton: w ← (w + u/w)/2
                let winv = mod_inverse(w % m, m);
                let half = mod_inverse(2 % m, m);
                w = mul_mod((w + mul_mod(u % m, winv, m)) % m, half, m);
                k = k2;
            }
            w % self.powers[prec as usize]
        }
    }
}

/// Inverse of a unit modulo a prime power (extended Euclid).
fn mod_inverse(a: u64, m: u64) -> u64 {
    crate::arithmetic::inv_mod(a, m).expect("unit expected")
}

/// Tonelli–Shanks square root mod an odd prime (input must be a QR).
fn tonelli_sqrt_mod_p(a: u64, p: u64) -> u64 {
    debug_assert!(is_square_unit(a, p));
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while is_square_unit(z, p) {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

struct MbBranch {
    /// f(x) = c0 + c4·x⁴ (the square of w)
    c0: u64,
    c4: u64,
    v_c4: u32,
    /// g(w, x) = w − g2·x² − g0 (must equal b·u²)
    g0: u64,
    g2: u64,
    v_g2: u32,
}

struct MbSearch<'c> {
    ctx: &'c PadicCtx,
    vb: u32,
    ub: u64,
}

impl MbSearch<'_> {
    /// Exact square test for a known-valuation residue ratio against b.
    fn accepts(&self, v: u32, u: u64) -> bool {
        if (v + self.vb) % 2 != 0 {
            return false;
        }
        if self.ctx.p == 2 {
            (u * self.ub) % 8 == 1
        } else {
            is_square_unit(u, self.ctx.p) == is_square_unit(self.ub, self.ctx.p)
        }
    }

    fn search(&self, br: &MbBranch) -> Result<bool> {
        let ctx = self.ctx;
        let mcap = ctx.cap.saturating_sub(2 * ctx.e + 2);
        let mut stack: Vec<(u64, u32)> = (0..ctx.p).map(|x| (x, 1u32)).collect();
        while let Some((x0, m)) = stack.pop() {
            let mut refine = false;
            let x4 = pow_mod(x0, 4, ctx.pmod);
            let f0 = (br.c0 + mul_mod(br.c4, x4, ctx.pmod)) % ctx.pmod;
            // knowledge precision of f over the class x ≡ x0 (mod p^m)
            let pf = (br.v_c4 + (2 * ctx.e + m).min(2 * m)).min(ctx.cap);
            let vf = ctx.v_of(f0 % ctx.powers[pf as usize]);
            if vf >= pf {
                refine = true;
            } else if vf % 2 == 0 {
                let pfu = pf - vf;
                if pfu < 2 * ctx.e + 1 {
                    refine = true;
                } else {
                    let uf = (f0 / ctx.powers[vf as usize]) % ctx.powers[pfu as usize];
                    if is_square_unit(uf, ctx.p) {
                        let pw = pf - ctx.e - vf / 2;
                        let wu = ctx.sqrt_unit(uf, pfu);
                        let wr = mul_mod(wu, ctx.powers[(vf / 2) as usize], ctx.pmod);
                        let x2 = mul_mod(x0, x0, ctx.pmod);
                        let fixed = (mul_mod(br.g2, x2, ctx.pmod) + br.g0) % ctx.pmod;
                        for w in [wr, ctx.pmod - wr] {
                            let g0v = (w + ctx.pmod - fixed) % ctx.pmod;
                            let pg_class = br.v_g2 + (ctx.e + m).min(2 * m);
                            let pg = pw.min(pg_class).min(ctx.cap);
                            let vg = ctx.v_of(g0v % ctx.powers[pg as usize]);
                            if vg >= pg || pg - vg < 2 * ctx.e + 1 {
                                refine = true;
                                continue;
                            }
                            let ug =
                                (g0v / ctx.powers[vg as usize]) % ctx.powers[(pg - vg) as usize];
                            if self.accepts(vg, ug) {
                                return Ok(true);
                            }
                        }
                    }
                }
            }
            // odd valuation of f: no square root, class dead
            if refine {
                if m + 1 > mcap {
                    return Err(Error::PrecisionExhausted { p: ctx.p });
                }
                for t in 0..ctx.p {
                    stack.push((x0 + t * ctx.powers[m as usize], m + 1));
                }
            }
        }
        Ok(false)
    }
}

/// Local solvability of M_b at one place, for the distinguished divisor d
/// with 2d = τ² + μ².
pub fn mb_solvable_at(
    n: &FactoredInteger,
    d: u64,
    b: i64,
    tau: u64,
    mu: u64,
    place: LocalPlace,
) -> Result<bool> {
    if tau as u128 * tau as u128 + mu as u128 * mu as u128 != 2 * d as u128 {
        return Err(Error::InternalInconsistency(format!(
            "τ² + μ² ≠ 2d: ({tau}, {mu}, {d})"
        )));
    }
    if b == 0 {
        return Err(Error::InternalInconsistency("b must be nonzero".into()));
    }
    let LocalPlace::Finite(p) = place else {
        // 2d > 0 makes the first equation definable for all (t, z) and both
        // signs of w reachable, so the sign of b·u² is never obstructed.
        return Ok(true);
    };
    if p > 1_000_000 {
        return Err(Error::TooLarge(format!("oracle prime {p} exceeds 10⁶")));
    }
    let nv = n.value;
    let nd = nv / d;

    // u = 0 points exist iff μt² = (n/d)τz² is solvable: (n/d)τμ ∈ ℚ_p².
    if is_padic_square(nd as i128 * tau as i128 * mu as i128, p) {
        return Ok(true);
    }
    // w = 0 points need t⁴ = −(n/d)²z⁴.
    if is_padic_fourth_power(-(nd as i128) * nd as i128, p) {
        if w0_point_accepts(nd, d, b, tau, mu, p)? {
            return Ok(true);
        }
    }

    let ctx = PadicCtx::new(p);
    let (vb, ub) = split_valuation(b as i128, p);
    let search = MbSearch {
        ctx: &ctx,
        vb,
        ub,
    };
    let c_quartic = 2 * (nv as u128) * (nv as u128) / d as u128; // 2n²/d
    let two_d = 2 * d as u128;
    let p4 = (p as u128).pow(4);
    let p2 = (p as u128).pow(2);
    let reduce = |x: u128| (x % ctx.pmod as u128) as u64;
    // branch A: (t, z) = (1, x);  branch B: (t, z) = (p·x, 1)
    let branch_a = MbBranch {
        c0: reduce(two_d),
        c4: reduce(c_quartic),
        v_c4: ctx.v_of(reduce(c_quartic)),
        g0: reduce(tau as u128),
        g2: reduce(nd as u128 * mu as u128),
        v_g2: ctx.v_of(reduce(nd as u128 * mu as u128)),
    };
    let branch_b = MbBranch {
        c0: reduce(c_quartic),
        c4: reduce(two_d * p4),
        v_c4: ctx.v_of(reduce(two_d * p4)),
        g0: reduce(nd as u128 * mu as u128),
        g2: reduce(tau as u128 * p2),
        v_g2: ctx.v_of(reduce(tau as u128 * p2)),
    };
    Ok(search.search(&branch_a)? || search.search(&branch_b)?)
}

/// Check the finitely many w = 0 points (t⁴ = −(n/d)², z = 1).
///
/// Only reachable at odd p ∤ n/d: t² is then one of ±i_p(n/d), and
/// `b·u² = −(τ·t² + (n/d)·μ)`. The two conjugate values have valuations
/// summing to v(2d·(n/d)²) ≤ 1, so modest precision decides exactly.
fn w0_point_accepts(nd: u64, d: u64, b: i64, tau: u64, mu: u64, p: u64) -> Result<bool> {
    debug_assert!(p % 2 == 1);
    let ctx = PadicCtx::new(p);
    let prec = 6.min(ctx.cap);
    let pm = ctx.powers[prec as usize];
    // i_p to precision p^prec
    let i_p = ctx.sqrt_unit(pm - 1, prec);
    let (vb, ub) = split_valuation(b as i128, p);
    let search = MbSearch {
        ctx: &ctx,
        vb,
        ub,
    };
    for s in [mul_mod(i_p, nd % pm, pm), pm - mul_mod(i_p, nd % pm, pm)] {
        // t² = s needs s to be a square unit
        if !is_square_unit(s % p, p) {
            continue;
        }
        let val = (pm - (mul_mod(tau % pm, s, pm) + mul_mod(nd % pm, mu % pm, pm)) % pm) % pm;
        if val == 0 {
            return Ok(true); // u = 0 as well; a point either way
        }
        let v = ctx.v_of(val);
        if v + 2 * ctx.e + 1 > prec {
            return Err(Error::PrecisionExhausted { p });
        }
        let u = (val / ctx.powers[v as usize]) % ctx.powers[(prec - v) as usize];
        if search.accepts(v, u) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::factorize;
    use crate::selmer::{phi_selmer_group, psi_selmer_group};

    fn el(v: i64) -> SelmerElement {
        SelmerElement::from_value(v)
    }

    #[test]
    fn quartic_trivial_points() {
        // (1, 1, 0) solves w² = t⁴ + 4n²z⁴ at every place
        for n in [17u64, 65, 145] {
            let form = QuarticForm::new(1, 4 * (n as i128) * (n as i128));
            for place in places(&factorize(n)) {
                assert!(quartic_solvable_at(&form, place).unwrap());
            }
        }
        // negative definite at the real place
        assert!(!quartic_solvable_at(&QuarticForm::new(-1, -1), LocalPlace::Real).unwrap());
        assert!(quartic_solvable_at(&QuarticForm::new(-1, 1), LocalPlace::Real).unwrap());
    }

    #[test]
    fn quartic_known_failure() {
        // d = 5 fails for n = 65 at p = 13 (matches Lemma 3.1)
        let form = QuarticForm::new(5, 4 * 65 * 65 / 5);
        assert!(!quartic_solvable_at(&form, LocalPlace::Finite(13)).unwrap());
        assert!(quartic_solvable_at(&form, LocalPlace::Finite(5)).unwrap());
    }

    #[test]
    fn quartic_square_detection() {
        assert!(is_padic_square(145, 2)); // 145 ≡ 1 mod 8
        assert!(!is_padic_square(5, 2));
        assert!(is_padic_square(4 * 9, 7));
        assert!(!is_padic_square(7, 7));
        assert!(is_padic_fourth_power(16 * 81, 5));
        assert!(!is_padic_fourth_power(4, 2));
    }

    #[test]
    fn oracle_agrees_with_closed_forms_small() {
        for n in (1u64..=600).filter(|&n| factorize(n).is_admissible()) {
            let f = factorize(n);
            assert_eq!(
                phi_selmer_oracle(&f).unwrap(),
                phi_selmer_group(&f).unwrap(),
                "φ mismatch at n = {n}"
            );
            assert_eq!(
                psi_selmer_oracle(&f).unwrap(),
                psi_selmer_group(&f).unwrap(),
                "ψ mismatch at n = {n}"
            );
        }
    }

    #[test]
    fn psi_even_classes_fail() {
        for n in [17u64, 65, 73] {
            let f = factorize(n);
            assert!(!cdprime_solvable_everywhere(&el(2), &f).unwrap());
            assert!(!cdprime_solvable_everywhere(&el(-2), &f).unwrap());
        }
    }

    #[test]
    fn psi_pm_one_pm_n_always_pass() {
        for n in [17u64, 41, 65, 73, 145] {
            let f = factorize(n);
            for v in [1i64, -1, n as i64, -(n as i64)] {
                assert!(cdprime_solvable_everywhere(&el(v), &f).unwrap(), "v = {v}");
            }
        }
    }

    /// ℚ(S,2) sweep for n = 17: δ(17) = 1, so no b is everywhere solvable.
    #[test]
    fn mb_obstruction_for_17() {
        let f = factorize(17);
        for b in [1i64, -1, 2, -2, 17, -17, 34, -34] {
            let all = places(&f).into_iter().all(|pl| {
                mb_solvable_at(&f, 1, b, 1, 1, pl).unwrap()
            });
            assert!(!all, "b = {b} unexpectedly survives everywhere");
        }
    }

    /// δ(41) = 0 and 41 is congruent: b = 1 must survive everywhere.
    #[test]
    fn mb_realizable_for_41() {
        let f = factorize(41);
        let all = places(&f)
            .into_iter()
            .all(|pl| mb_solvable_at(&f, 1, 1, 1, 1, pl).unwrap());
        assert!(all);
    }

    /// δ(65) = 0: b = 2 passes the closed-form conditions at p = 5 and 13.
    #[test]
    fn mb_realizable_for_65() {
        let f = factorize(65);
        let all = places(&f)
            .into_iter()
            .all(|pl| mb_solvable_at(&f, 5, 2, 1, 3, pl).unwrap());
        assert!(all);
    }

    /// Lemma 3.3/3.4 closed forms vs the search engine at odd places.
    #[test]
    fn mb_matches_closed_form_conditions() {
        use crate::arithmetic::{jacobi_symbol, mul_mod, RationalSquareClass};
        use crate::descent::compute_descent_data;
        for n in [17u64, 41, 65, 73, 89, 97, 113, 137, 257, 265] {
            let f = factorize(n);
            let data = compute_descent_data(&f).unwrap();
            let (d, tau, mu, i) = (data.d, data.tau, data.mu, data.i);
            for b in crate::selmer::signed_candidates(&f) {
                let bv = b.value();
                for p in f.primes() {
                    let got = mb_solvable_at(&f, d, bv, tau, mu, LocalPlace::Finite(p)).unwrap();
                    // symbol (τ + μ·i_p / p), well defined on both i_p choices
                    let i_p = i % p;
                    let arg = (tau % p + mul_mod(mu % p, i_p, p)) % p;
                    let base = jacobi_symbol(arg as i64, p).unwrap();
                    let target = if d % p == 0 {
                        base
                    } else {
                        base * jacobi_symbol(2, p).unwrap()
                    };
                    let expect = if b.odd_part % p == 0 {
                        // p | b: (n/b / p) must equal the target
                        let n_over_b = RationalSquareClass::new(n as i64)
                            .times(&RationalSquareClass::new(bv));
                        crate::arithmetic::legendre_symbol(&n_over_b, p).unwrap() == target
                    } else {
                        let cls = RationalSquareClass::new(bv);
                        crate::arithmetic::legendre_symbol(&cls, p).unwrap() == target
                    };
                    assert_eq!(got, expect, "n = {n}, b = {bv}, p = {p}");
                }
            }
        }
    }
}
