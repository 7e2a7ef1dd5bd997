//! Exact modular arithmetic and quadratic-symbol primitives.
//!
//! Everything here works on 64-bit integers with 128-bit intermediates, which
//! covers the whole desk-scale range of the descent pipeline without big
//! integers. Factorization is deterministic: trial division up to 10⁶
//! followed by Brent's variant of Pollard rho, with a Miller–Rabin witness
//! set that is exact below 2⁶⁴.

use crate::{Error, Result};

/// Multiply modulo `m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Compute `a^e mod m`.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Modular inverse of `a` mod `m` for coprime inputs.
pub fn inv_mod(a: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotCoprime {
            a: (a % m) as i64,
            n: m,
        });
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller–Rabin, exact for all n < 2⁶⁴.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle detection; n is odd, composite, and has no factor < 10⁶.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut q = 1u64;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            q = mul_mod(q, x.abs_diff(y) % n, n);
            count += 1;
            if count % 64 == 0 || q == 0 {
                d = gcd(if q == 0 { x.abs_diff(y) } else { q }, n);
                q = 1;
            }
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// A positive integer together with its sorted prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: u64,
    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub factors: Vec<(u64, u32)>,
    pub is_squarefree: bool,
    pub residue_mod_8: u8,
}

impl FactoredInteger {
    /// Prime factors without multiplicity.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn num_primes(&self) -> usize {
        self.factors.len()
    }

    /// Suitable for the prime graph: squarefree, greater than 1, and every
    /// prime factor congruent to 1 mod 4.
    pub fn is_graph_admissible(&self) -> bool {
        self.value > 1 && self.is_squarefree && self.primes().all(|p| p % 4 == 1)
    }

    /// Full admissibility for the descent: graph-admissible and n ≡ 1 mod 8.
    pub fn is_admissible(&self) -> bool {
        self.is_graph_admissible() && self.residue_mod_8 == 1
    }

    pub fn check_admissible(&self) -> Result<()> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::InadmissibleInput {
                n: self.value,
                why: "need squarefree n > 1, n ≡ 1 mod 8, all prime factors ≡ 1 mod 4".into(),
            })
        }
    }
}

/// Complete, deterministic prime factorization of `n ≥ 1`.
pub fn factorize(n: u64) -> FactoredInteger {
    assert!(n >= 1, "factorize requires n ≥ 1");
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut push = |p: u64, e: u32| {
        factors.push((p, e));
    };
    if rest % 2 == 0 {
        let e = rest.trailing_zeros();
        rest >>= e;
        push(2, e);
    }
    let mut p = 3u64;
    while p <= 1_000_000 && p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            push(p, e);
        }
        p += 2;
    }
    // The remaining cofactor has no prime factor ≤ 10⁶.
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            large.push(m);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    large.sort_unstable();
    let mut i = 0;
    while i < large.len() {
        let p = large[i];
        let mut e = 0;
        while i < large.len() && large[i] == p {
            e += 1;
            i += 1;
        }
        push(p, e);
    }
    let is_squarefree = factors.iter().all(|&(_, e)| e == 1);
    FactoredInteger {
        value: n,
        factors,
        is_squarefree,
        residue_mod_8: (n % 8) as u8,
    }
}

/// A rational square class represented by a signed squarefree integer.
///
/// Two rationals are identified when their quotient is a nonzero rational
/// square, so every class has a unique signed squarefree representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalSquareClass {
    rep: i64,
}

impl RationalSquareClass {
    /// Class of a nonzero integer: square factors are divided out eagerly.
    pub fn new(x: i64) -> Self {
        assert!(x != 0, "square class of zero is undefined");
        let f = factorize(x.unsigned_abs());
        let mut rep: i64 = if x < 0 { -1 } else { 1 };
        for (p, e) in f.factors {
            if e % 2 == 1 {
                rep *= p as i64;
            }
        }
        RationalSquareClass { rep }
    }

    pub fn rep(&self) -> i64 {
        self.rep
    }

    /// Product of classes (squarefree multiplication).
    pub fn times(&self, other: &Self) -> Self {
        let g = gcd(self.rep.unsigned_abs(), other.rep.unsigned_abs()) as i64;
        RationalSquareClass {
            rep: (self.rep / g) * (other.rep / g),
        }
    }
}

/// Legendre symbol `a^((p−1)/2) mod p` on units, for odd prime `p`.
fn euler_symbol(a: u64, p: u64) -> i8 {
    debug_assert!(a % p != 0);
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Extended Legendre symbol on a square class: the even p-part is stripped by
/// construction, so this is defined exactly when p does not divide the
/// squarefree representative.
pub fn legendre_symbol(a: &RationalSquareClass, p: u64) -> Result<i8> {
    let rep = a.rep();
    if rep.unsigned_abs() % p == 0 {
        return Err(Error::OddValuation { rep, p });
    }
    let mut sign = 1i8;
    if rep < 0 && p % 4 == 3 {
        sign = -1;
    }
    Ok(sign * euler_symbol(rep.unsigned_abs() % p, p))
}

/// Jacobi symbol `(a/n)` for odd positive `n` coprime to `a`.
pub fn jacobi_symbol(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::NotCoprime { a, n });
    }
    if gcd(a.unsigned_abs() % n.max(1), n) != 1 && n != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    let mut t = 1i8;
    let mut n = n;
    // (−1/n) = (−1)^((n−1)/2)
    if a < 0 && n % 4 == 3 {
        t = -t;
    }
    let mut a = a.unsigned_abs() % n.max(1);
    if n == 1 {
        return Ok(1);
    }
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    debug_assert_eq!(n, 1);
    Ok(t)
}

/// Additive form of the Jacobi symbol: `[a/n] = (1 − (a/n))/2 ∈ F₂`.
pub fn bracket_symbol(a: i64, n: u64) -> Result<u8> {
    Ok(if jacobi_symbol(a, n)? == 1 { 0 } else { 1 })
}

/// The smaller square root of −1 modulo a prime `p ≡ 1 (mod 4)`.
///
/// Computed by raising a verified quadratic non-residue to the power
/// `(p−1)/4` (the Tonelli–Shanks first step); deterministic because the
/// non-residue scan is ascending and the smaller of the two roots is
/// returned.
pub fn sqrt_minus_one(p: u64) -> Result<u64> {
    if p % 4 != 1 || !is_prime(p) {
        return Err(Error::BadResidue { p });
    }
    let mut g = 2u64;
    while euler_symbol(g, p) == 1 {
        g += 1;
    }
    let i = pow_mod(g, (p - 1) / 4, p);
    debug_assert_eq!(mul_mod(i, i, p), p - 1);
    Ok(i.min(p - i))
}

/// Cornacchia: `x² + y² = p` for prime `p ≡ 1 (mod 4)` (or p = 2).
fn two_squares_prime(p: u64) -> Result<(u64, u64)> {
    if p == 2 {
        return Ok((1, 1));
    }
    let root = sqrt_minus_one(p)?;
    // Euclidean descent from (p, root): the first remainder below √p is one
    // leg, the next is the other.
    let mut a = p;
    let mut b = root.max(p - root);
    while (b as u128) * (b as u128) >= p as u128 {
        let r = a % b;
        a = b;
        b = r;
    }
    let x = b;
    let y2 = p - x * x;
    let y = y2.isqrt();
    if y * y != y2 {
        return Err(Error::InternalInconsistency(format!(
            "cornacchia failed at p = {p}"
        )));
    }
    Ok((x.min(y), x.max(y)))
}

/// Canonical two-square representation `m = τ² + μ²` with `τ ≤ μ`, both odd
/// and positive, for `m ≡ 2 (mod 4)` whose odd part is squarefree with all
/// prime factors `≡ 1 (mod 4)`.
///
/// Per-prime representations come from Cornacchia's algorithm and are
/// composed with the Brahmagupta–Fibonacci identity, so this stays fast for
/// 63-bit inputs.
pub fn two_squares(m: u64) -> Result<(u64, u64)> {
    if m % 4 != 2 {
        return Err(Error::NoRepresentation { m });
    }
    let odd = factorize(m / 2);
    if !odd.is_squarefree || odd.primes().any(|p| p % 4 != 1) {
        return Err(Error::NoRepresentation { m });
    }
    // Start from 2 = 1² + 1² and multiply in one Gaussian factor per prime.
    let (mut x, mut y) = (1i128, 1i128);
    for p in odd.primes() {
        let (a, b) = two_squares_prime(p)?;
        let (a, b) = (a as i128, b as i128);
        let (nx, ny) = (x * a - y * b, x * b + y * a);
        x = nx.abs();
        y = ny.abs();
    }
    let (tau, mu) = (x.min(y) as u64, x.max(y) as u64);
    debug_assert_eq!(tau as u128 * tau as u128 + mu as u128 * mu as u128, m as u128);
    debug_assert!(tau % 2 == 1 && mu % 2 == 1);
    Ok((tau, mu))
}

/// All essentially distinct representations `m = τ² + μ²` with `0 < τ ≤ μ`,
/// by exhaustive search. Intended for invariance testing at desk scale.
pub fn all_two_squares(m: u64) -> Result<Vec<(u64, u64)>> {
    if m > 4_000_000_000_000 {
        return Err(Error::TooLarge(format!(
            "exhaustive two-square search capped at 4·10¹², got {m}"
        )));
    }
    let mut out = Vec::new();
    let mut t = 1u64;
    while t * t <= m / 2 {
        let rest = m - t * t;
        let u = rest.isqrt();
        if u * u == rest {
            out.push((t, u));
        }
        t += 1;
    }
    Ok(out)
}

/// Chinese remainder theorem for pairwise coprime moduli.
///
/// Input pairs are `(residue, modulus)`; the result is the unique residue
/// modulo the product of the moduli.
pub fn crt(parts: &[(u64, u64)]) -> Result<u64> {
    let mut x: u128 = 0;
    let mut modulus: u128 = 1;
    for &(r, m) in parts {
        if m == 0 {
            return Err(Error::NotCoprimeModuli);
        }
        let g = {
            let mut a = modulus;
            let mut b = m as u128;
            while b != 0 {
                let t = b;
                b = a % b;
                a = t;
            }
            a
        };
        if g != 1 {
            return Err(Error::NotCoprimeModuli);
        }
        // x ≡ x (mod modulus), x ≡ r (mod m)
        let mm = modulus % m as u128;
        let inv = inv_mod(mm as u64, m).map_err(|_| Error::NotCoprimeModuli)? as u128;
        let diff = (r as u128 + m as u128 - x % m as u128) % m as u128;
        let k = (diff * inv) % m as u128;
        x += k * modulus;
        modulus *= m as u128;
        if modulus > u64::MAX as u128 {
            return Err(Error::TooLarge("CRT modulus exceeds 64 bits".into()));
        }
    }
    Ok(x as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1).factors, vec![]);
        assert!(factorize(1).is_squarefree);
        assert_eq!(factorize(65).factors, vec![(5, 1), (13, 1)]);
        assert_eq!(factorize(289).factors, vec![(17, 2)]);
        assert!(!factorize(289).is_squarefree);
        assert_eq!(factorize(2 * 3 * 5 * 7 * 11).factors.len(), 5);
    }

    #[test]
    fn factorize_large_semiprime() {
        let n = 1_000_003u64 * 1_000_033;
        let f = factorize(n);
        assert_eq!(f.factors, vec![(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn square_class_reduction() {
        assert_eq!(RationalSquareClass::new(12).rep(), 3);
        assert_eq!(RationalSquareClass::new(-18).rep(), -2);
        assert_eq!(RationalSquareClass::new(49).rep(), 1);
        let a = RationalSquareClass::new(10);
        let b = RationalSquareClass::new(26);
        assert_eq!(a.times(&b).rep(), 65);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(&RationalSquareClass::new(2), 17).unwrap(), 1);
        assert_eq!(legendre_symbol(&RationalSquareClass::new(5), 13).unwrap(), -1);
        for p in [3u64, 5, 7, 11, 13, 17] {
            assert_eq!(legendre_symbol(&RationalSquareClass::new(1), p).unwrap(), 1);
        }
        assert!(matches!(
            legendre_symbol(&RationalSquareClass::new(13), 13),
            Err(Error::OddValuation { .. })
        ));
    }

    #[test]
    fn legendre_matches_euler_criterion() {
        // Euler oracle over every unit for all odd primes below 300.
        for p in (3u64..300).filter(|&p| is_prime(p)) {
            for a in 1..p {
                let euler = pow_mod(a, (p - 1) / 2, p);
                let expect = if euler == 1 { 1 } else { -1 };
                let cls = RationalSquareClass::new(a as i64);
                if cls.rep().unsigned_abs() % p != 0 {
                    assert_eq!(legendre_symbol(&cls, p).unwrap(), expect);
                }
                assert_eq!(jacobi_symbol(a as i64, p).unwrap(), expect);
            }
        }
    }

    #[test]
    fn quadratic_reciprocity_for_1_mod_4() {
        let primes: Vec<u64> = (5..500).filter(|&p| is_prime(p) && p % 4 == 1).collect();
        for &p in &primes {
            for &q in &primes {
                if p != q {
                    assert_eq!(
                        legendre_symbol(&RationalSquareClass::new(p as i64), q).unwrap(),
                        legendre_symbol(&RationalSquareClass::new(q as i64), p).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_symbol(1, 45).unwrap(), 1);
        assert_eq!(jacobi_symbol(5, 17).unwrap(), -1);
        assert_eq!(jacobi_symbol(12, 65).unwrap(), -1);
        assert_eq!(jacobi_symbol(7, 1).unwrap(), 1);
        assert_eq!(jacobi_symbol(-1, 13).unwrap(), 1);
        assert_eq!(jacobi_symbol(-1, 7).unwrap(), -1);
        assert!(matches!(
            jacobi_symbol(10, 65),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn jacobi_is_product_of_legendre() {
        for n in (3u64..400).step_by(2) {
            let f = factorize(n);
            for a in 1..60i64 {
                if gcd(a.unsigned_abs(), n) != 1 {
                    continue;
                }
                let mut prod = 1i8;
                for (p, e) in &f.factors {
                    let s = jacobi_symbol(a, *p).unwrap();
                    for _ in 0..*e {
                        prod *= s;
                    }
                }
                assert_eq!(jacobi_symbol(a, n).unwrap(), prod, "a={a} n={n}");
            }
        }
    }

    #[test]
    fn bracket_additivity() {
        for n in (3u64..200).step_by(2) {
            for a in 1..40i64 {
                for b in 1..40i64 {
                    if gcd(a.unsigned_abs(), n) == 1 && gcd(b.unsigned_abs(), n) == 1 {
                        assert_eq!(
                            bracket_symbol(a * b, n).unwrap(),
                            bracket_symbol(a, n).unwrap() ^ bracket_symbol(b, n).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sqrt_minus_one_examples() {
        assert_eq!(sqrt_minus_one(5).unwrap(), 2);
        assert_eq!(sqrt_minus_one(17).unwrap(), 4);
        assert_eq!(sqrt_minus_one(13).unwrap(), 5);
        assert!(matches!(sqrt_minus_one(7), Err(Error::BadResidue { .. })));
        assert!(matches!(sqrt_minus_one(15), Err(Error::BadResidue { .. })));
        for p in (5u64..100_000).filter(|&p| p % 4 == 1 && is_prime(p)) {
            let i = sqrt_minus_one(p).unwrap();
            assert_eq!(mul_mod(i, i, p), p - 1);
            assert!(i < p - i);
        }
    }

    #[test]
    fn two_squares_examples() {
        assert_eq!(two_squares(2).unwrap(), (1, 1));
        assert_eq!(two_squares(10).unwrap(), (1, 3));
        assert_eq!(two_squares(34).unwrap(), (3, 5));
        assert!(matches!(two_squares(12), Err(Error::NoRepresentation { .. })));
        assert!(matches!(two_squares(6), Err(Error::NoRepresentation { .. })));
        // 2·(5·5) has a squarefree violation
        assert!(matches!(two_squares(50), Err(Error::NoRepresentation { .. })));
    }

    #[test]
    fn two_squares_matches_exhaustive_search() {
        for m in (2u64..=1_000_000).step_by(4) {
            let odd = m / 2;
            let f = factorize(odd);
            if !f.is_squarefree || f.primes().any(|p| p % 4 != 1) {
                continue;
            }
            let (tau, mu) = two_squares(m).unwrap();
            assert_eq!(tau * tau + mu * mu, m);
            assert!(tau <= mu && tau % 2 == 1 && mu % 2 == 1);
            let all = all_two_squares(m).unwrap();
            assert!(all.contains(&(tau, mu)), "m = {m}");
        }
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt(&[(2, 5), (8, 13)]).unwrap(), 47);
        assert_eq!(crt(&[(3, 5), (8, 13)]).unwrap(), 8);
        assert_eq!(crt(&[(4, 9)]).unwrap(), 4);
        assert_eq!(crt(&[]).unwrap(), 0);
        assert_eq!(crt(&[(0, 1), (3, 7)]).unwrap(), 3);
        assert!(matches!(
            crt(&[(1, 6), (2, 4)]),
            Err(Error::NotCoprimeModuli)
        ));
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime(2));
        assert!(is_prime(1_000_003));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime(1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }
}
