//! Closed-form Selmer group computations for the 2-isogeny descent.
//!
//! Square classes unramified outside 2n are represented by signed squarefree
//! divisors of 2n. Membership in the φ- and ψ-Selmer groups reduces to
//! residue conditions on quadratic symbols; the independent verification of
//! these closed forms lives in [`crate::padic_oracle`].

use crate::arithmetic::{bracket_symbol, legendre_symbol, FactoredInteger, RationalSquareClass};
use crate::f2linalg::F2Vector;
use crate::graph::{build_graph, is_odd_graph, laplace_matrix};
use crate::{Error, Result};

/// A class in ℚ(S,2): sign · (2 if `even`) · odd squarefree divisor of n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SelmerElement {
    pub sign: i8,
    pub even: bool,
    pub odd_part: u64,
}

impl SelmerElement {
    pub fn new(sign: i8, even: bool, odd_part: u64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        debug_assert!(odd_part % 2 == 1);
        SelmerElement {
            sign,
            even,
            odd_part,
        }
    }

    /// The signed squarefree integer representing the class.
    pub fn value(&self) -> i64 {
        let v = (self.odd_part as i64) * if self.even { 2 } else { 1 };
        v * self.sign as i64
    }

    pub fn from_value(v: i64) -> Self {
        assert!(v != 0);
        let a = v.unsigned_abs();
        SelmerElement {
            sign: if v < 0 { -1 } else { 1 },
            even: a % 2 == 0,
            odd_part: if a % 2 == 0 { a / 2 } else { a },
        }
    }

    pub fn one() -> Self {
        SelmerElement::new(1, false, 1)
    }

    pub fn square_class(&self) -> RationalSquareClass {
        RationalSquareClass::new(self.value())
    }

    /// Group law: squarefree product of representatives.
    pub fn compose(&self, other: &Self) -> Self {
        SelmerElement::from_value(self.square_class().times(&other.square_class()).rep())
    }
}

/// An elementary abelian 2-group of Selmer classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelmerGroup {
    /// Sorted class representatives; always contains 1.
    pub elements: Vec<SelmerElement>,
}

impl SelmerGroup {
    pub fn from_elements(mut elements: Vec<SelmerElement>) -> Self {
        elements.sort_by_key(|e| (e.odd_part, e.even, e.sign));
        SelmerGroup { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: &SelmerElement) -> bool {
        self.elements.contains(e)
    }

    pub fn values(&self) -> Vec<i64> {
        self.elements.iter().map(|e| e.value()).collect()
    }

    /// Closure under composition (sanity check for test code).
    pub fn is_group(&self) -> bool {
        self.contains(&SelmerElement::one())
            && self.elements.iter().all(|a| {
                self.elements
                    .iter()
                    .all(|b| self.contains(&a.compose(b)))
            })
    }
}

fn check_candidate(e: &SelmerElement, n: &FactoredInteger) -> Result<()> {
    if e.odd_part == 0 || n.value % e.odd_part != 0 {
        return Err(Error::InadmissibleInput {
            n: n.value,
            why: format!("{} is not a divisor class of 2n", e.value()),
        });
    }
    Ok(())
}

/// Membership of a positive divisor class of 2n in S^(φ)(E/ℚ).
///
/// Conditions: d > 0 with no prime factor ≡ 3 (mod 4); (n/d / p) = 1 for all
/// odd p | d; (d/p) = 1 for all odd p | 2n/d; and n ≡ ±1 (mod 8) when d is
/// even. Symbols are evaluated on squarefree class representatives, which is
/// exactly the extended-symbol semantics.
pub fn phi_member(e: &SelmerElement, n: &FactoredInteger) -> Result<bool> {
    n.check_admissible()?;
    check_candidate(e, n)?;
    if e.sign < 0 {
        return Ok(false);
    }
    // No prime factor ≡ 3 (mod 4): automatic, divisors of admissible n are
    // built from primes ≡ 1 (mod 4) and the prime 2.
    let class_d = e.square_class();
    // n/d as a square class: (2 if even) · n/odd_part.
    let cofactor = n.value / e.odd_part;
    let class_n_over_d =
        RationalSquareClass::new((cofactor as i64) * if e.even { 2 } else { 1 });
    for p in n.primes() {
        if e.odd_part % p == 0 {
            if legendre_symbol(&class_n_over_d, p)? != 1 {
                return Ok(false);
            }
        } else if legendre_symbol(&class_d, p)? != 1 {
            return Ok(false);
        }
    }
    if e.even && !(n.residue_mod_8 == 1 || n.residue_mod_8 == 7) {
        return Ok(false);
    }
    Ok(true)
}

/// Membership of a signed odd divisor class in S^(ψ)(E′/ℚ).
///
/// Every class containing the factor 2 is excluded (2-adic valuation
/// obstruction). Otherwise: d ≡ ±1 (mod 8) or n/d ≡ ±1 (mod 8), and
/// (n/d / p) = 1 for p | d, (d/p) = 1 for p | n/d, over primes ≡ 1 (mod 4).
pub fn psi_member(e: &SelmerElement, n: &FactoredInteger) -> Result<bool> {
    n.check_admissible()?;
    check_candidate(e, n)?;
    if e.even {
        return Ok(false);
    }
    let d_signed = e.value();
    let n_over_d_signed = (n.value / e.odd_part) as i64 * e.sign as i64;
    let pm1_mod_8 = |x: i64| matches!(x.rem_euclid(8), 1 | 7);
    if !pm1_mod_8(d_signed) && !pm1_mod_8(n_over_d_signed) {
        return Ok(false);
    }
    let class_d = e.square_class();
    let class_n_over_d = RationalSquareClass::new(n_over_d_signed);
    for p in n.primes().filter(|p| p % 4 == 1) {
        if e.odd_part % p == 0 {
            if legendre_symbol(&class_n_over_d, p)? != 1 {
                return Ok(false);
            }
        } else if legendre_symbol(&class_d, p)? != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All positive divisor classes of 2n in the candidate pool for S^(φ).
pub fn phi_candidates(n: &FactoredInteger) -> Vec<SelmerElement> {
    let k = n.num_primes();
    let mut out = Vec::with_capacity(1 << (k + 1));
    let primes: Vec<u64> = n.primes().collect();
    for mask in 0u32..1 << k {
        let odd: u64 = primes
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .product();
        for even in [false, true] {
            out.push(SelmerElement::new(1, even, odd));
        }
    }
    out
}

/// All signed classes of 2n (candidate pool for S^(ψ) and for ℚ(S,2) sweeps).
pub fn signed_candidates(n: &FactoredInteger) -> Vec<SelmerElement> {
    let mut out = Vec::new();
    for e in phi_candidates(n) {
        out.push(e);
        out.push(SelmerElement::new(-1, e.even, e.odd_part));
    }
    out
}

/// S^(φ)(E/ℚ) by the closed-form membership test.
pub fn phi_selmer_group(n: &FactoredInteger) -> Result<SelmerGroup> {
    let mut elements = Vec::new();
    for e in phi_candidates(n) {
        if phi_member(&e, n)? {
            elements.push(e);
        }
    }
    Ok(SelmerGroup::from_elements(elements))
}

/// S^(ψ)(E′/ℚ) by the closed-form membership test.
pub fn psi_selmer_group(n: &FactoredInteger) -> Result<SelmerGroup> {
    let mut elements = Vec::new();
    for e in signed_candidates(n) {
        if psi_member(&e, n)? {
            elements.push(e);
        }
    }
    Ok(SelmerGroup::from_elements(elements))
}

/// The distinguished divisor d of n for an odd graph G(n).
///
/// Solves L(G)·c = t with t_i = [2/p_i]; the two solutions give the pair
/// {d, n/d}, canonicalized to the member below √(2n) (the smaller one, which
/// always qualifies).
pub fn find_descent_divisor(n: &FactoredInteger) -> Result<u64> {
    n.check_admissible()?;
    let g = build_graph(n)?;
    if !is_odd_graph(&g) {
        return Err(Error::GraphNotOdd { n: n.value });
    }
    let k = g.num_vertices();
    let l = laplace_matrix(&g);
    let mut t = F2Vector::zero(k);
    for (i, p) in g.vertices.iter().enumerate() {
        t.set(i, bracket_symbol(2, *p)? == 1);
    }
    // Σ t_i = [2/n] = 0 since n ≡ 1 (mod 8), so the system is solvable for
    // an odd graph (image = parity-zero hyperplane).
    let Some((c, _basis)) = l.solve(&t)? else {
        return Err(Error::InternalInconsistency(format!(
            "L·c = t unsolvable for odd graph at n = {}",
            n.value
        )));
    };
    let d0: u64 = g
        .vertices
        .iter()
        .enumerate()
        .filter(|&(i, _)| c.get(i))
        .map(|(_, &p)| p)
        .product();
    let d = d0.min(n.value / d0);
    debug_assert!((d as u128) * (d as u128) < 2 * n.value as u128);
    let twice_d = SelmerElement::new(1, true, d);
    if !phi_member(&twice_d, n)? {
        return Err(Error::InternalInconsistency(format!(
            "2d fails φ-membership for d = {d}, n = {}",
            n.value
        )));
    }
    Ok(d)
}
