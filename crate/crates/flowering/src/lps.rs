//! The Lubotzky-Phillips-Sarnak family of (p+1)-regular Ramanujan Cayley
//! graphs on PSL2/PGL2 over F_q.
//!
//! Generators come from the integer quadruples `(a0, a1, a2, a3)` with
//! `a0^2 + a1^2 + a2^2 + a3^2 = p`, `a0 > 0` odd and the rest even; there
//! are exactly `p + 1` of them, they map to the projective matrices
//! `[[a0 + a1 i, a2 + a3 i], [-a2 + a3 i, a0 - a1 i]]` with `i^2 = -1 mod
//! q`, and the set is closed under inversion. The group is PSL2(F_q) when
//! `p` is a quadratic residue mod q and PGL2(F_q) otherwise.

use crate::field::{is_prime, FieldElement, PrimeField};
use crate::group::{build_cayley, Cayley, FiniteGroup, GeneratorSet, GroupError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpsError {
    #[error("p and q must be distinct primes congruent to 1 mod 4 with q > 2 sqrt(p)")]
    BadCongruence,
    #[error("quadruple enumeration found {0} solutions instead of p + 1")]
    TooFewSolutions(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A 2x2 projective matrix over F_q in canonical form: scaled so the
/// first nonzero entry in row-major order is 1.
pub type ProjMat = [u64; 4];

/// PGL2(F_q), or its index-2 subgroup PSL2(F_q) (square determinants).
#[derive(Debug, Clone)]
pub struct ProjectiveLinearGroup {
    field: PrimeField,
    special: bool,
}

impl ProjectiveLinearGroup {
    pub fn pgl2(q: u64) -> Result<ProjectiveLinearGroup, LpsError> {
        let field = PrimeField::new(q).map_err(|_| LpsError::BadCongruence)?;
        Ok(ProjectiveLinearGroup { field, special: false })
    }

    pub fn psl2(q: u64) -> Result<ProjectiveLinearGroup, LpsError> {
        let field = PrimeField::new(q).map_err(|_| LpsError::BadCongruence)?;
        Ok(ProjectiveLinearGroup { field, special: true })
    }

    pub fn is_special(&self) -> bool {
        self.special
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    fn det(&self, m: &ProjMat) -> FieldElement {
        let f = &self.field;
        f.sub(
            f.mul(FieldElement(m[0]), FieldElement(m[3])),
            f.mul(FieldElement(m[1]), FieldElement(m[2])),
        )
    }

    /// Scales so the first nonzero entry equals 1.
    pub fn canonicalize(&self, m: &ProjMat) -> Result<ProjMat, LpsError> {
        if self.det(m).0 == 0 {
            return Err(LpsError::SingularMatrix);
        }
        let f = &self.field;
        let lead = m.iter().find(|&&x| x != 0).expect("nonsingular matrix has a nonzero entry");
        let s = f.inv(FieldElement(*lead)).expect("nonzero");
        Ok([
            f.mul(FieldElement(m[0]), s).0,
            f.mul(FieldElement(m[1]), s).0,
            f.mul(FieldElement(m[2]), s).0,
            f.mul(FieldElement(m[3]), s).0,
        ])
    }

    fn is_square(&self, x: FieldElement) -> bool {
        // Euler's criterion; 0 is a square
        x.0 == 0 || self.field.pow(x, (self.field.modulus() - 1) / 2).0 == 1
    }

    /// Membership in the represented group for a canonical matrix.
    pub fn contains(&self, m: &ProjMat) -> bool {
        // scaling by c multiplies the determinant by c^2, so squareness
        // of the determinant is a class invariant
        !self.special || self.is_square(self.det(m))
    }
}

impl FiniteGroup for ProjectiveLinearGroup {
    type Elem = ProjMat;

    fn identity(&self) -> ProjMat {
        [1, 0, 0, 1]
    }

    fn multiply(&self, a: &ProjMat, b: &ProjMat) -> ProjMat {
        let f = &self.field;
        let e = |x: u64| FieldElement(x);
        let m = [
            f.add(f.mul(e(a[0]), e(b[0])), f.mul(e(a[1]), e(b[2]))).0,
            f.add(f.mul(e(a[0]), e(b[1])), f.mul(e(a[1]), e(b[3]))).0,
            f.add(f.mul(e(a[2]), e(b[0])), f.mul(e(a[3]), e(b[2]))).0,
            f.add(f.mul(e(a[2]), e(b[1])), f.mul(e(a[3]), e(b[3]))).0,
        ];
        self.canonicalize(&m).expect("product of invertible matrices")
    }

    fn inverse(&self, a: &ProjMat) -> ProjMat {
        // adjugate; the determinant scalar washes out projectively
        let f = &self.field;
        let m = [a[3], f.neg(FieldElement(a[1])).0, f.neg(FieldElement(a[2])).0, a[0]];
        self.canonicalize(&m).expect("invertible")
    }

    fn elements(&self) -> Vec<ProjMat> {
        let q = self.field.modulus();
        let mut out = Vec::new();
        let mut push_if_ok = |m: ProjMat, g: &ProjectiveLinearGroup| {
            if g.det(&m).0 != 0 && g.contains(&m) {
                out.push(m);
            }
        };
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    push_if_ok([1, b, c, d], self);
                }
            }
        }
        for c in 0..q {
            for d in 0..q {
                push_if_ok([0, 1, c, d], self);
            }
        }
        // a = b = 0 forces det = 0; no further canonical forms exist
        out
    }

    fn encode(&self, a: &ProjMat) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * self.field.byte_len());
        for &x in a {
            out.extend_from_slice(&self.field.canonical_bytes(FieldElement(x)));
        }
        out
    }

    fn describe(&self) -> String {
        let name = if self.special { "PSL2" } else { "PGL2" };
        format!("{}(F{})", name, self.field.modulus())
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// The `p + 1` integer quadruples of norm `p` with odd positive first
/// coordinate and even remaining coordinates.
pub fn norm_p_quadruples(p: u64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    let bound = isqrt(p) as i64;
    let mut a0 = 1i64;
    while a0 * a0 <= p as i64 {
        let rem0 = p as i64 - a0 * a0;
        let mut a1 = -bound;
        while a1 <= bound {
            if a1.rem_euclid(2) == 0 && a1 * a1 <= rem0 {
                let rem1 = rem0 - a1 * a1;
                let mut a2 = -bound;
                while a2 <= bound {
                    if a2.rem_euclid(2) == 0 && a2 * a2 <= rem1 {
                        let rem2 = rem1 - a2 * a2;
                        let a3 = isqrt(rem2 as u64) as i64;
                        if a3 * a3 == rem2 && a3.rem_euclid(2) == 0 {
                            out.push([a0, a1, a2, a3]);
                            if a3 != 0 {
                                out.push([a0, a1, a2, -a3]);
                            }
                        }
                    }
                    a2 += 1;
                }
            }
            a1 += 1;
        }
        a0 += 2;
    }
    out.sort();
    out.dedup();
    out
}

/// The assembled LPS instance: the group, its generating set, and the
/// `(p+1)`-regular Cayley graph.
#[derive(Debug)]
pub struct LpsInstance {
    pub cayley: Cayley<ProjectiveLinearGroup>,
    pub p: u64,
    pub q: u64,
}

/// Builds the LPS graph for primes `p != q`, both `1 mod 4`, `q > 2
/// sqrt(p)`.
pub fn lps_graph(p: u64, q: u64) -> Result<LpsInstance, LpsError> {
    if !is_prime(p) || !is_prime(q) || p % 4 != 1 || q % 4 != 1 || p == q || q * q <= 4 * p {
        return Err(LpsError::BadCongruence);
    }
    let quads = norm_p_quadruples(p);
    if quads.len() != (p + 1) as usize {
        return Err(LpsError::TooFewSolutions(quads.len()));
    }

    // p a quadratic residue mod q picks the special group
    let probe = ProjectiveLinearGroup::pgl2(q)?;
    let p_is_square = probe.is_square(FieldElement(p % q));
    let group = if p_is_square {
        ProjectiveLinearGroup::psl2(q)?
    } else {
        ProjectiveLinearGroup::pgl2(q)?
    };

    // smallest square root of -1 mod q
    let f = group.field().clone();
    let i = (1..q)
        .map(FieldElement)
        .find(|&x| f.mul(x, x).0 == q - 1)
        .expect("q = 1 mod 4 has a root of -1");

    let to_fe = |v: i64| -> FieldElement {
        let r = v.rem_euclid(q as i64) as u64;
        FieldElement(r)
    };
    let mut mats = Vec::with_capacity(quads.len());
    for [a0, a1, a2, a3] in &quads {
        let m = [
            f.add(to_fe(*a0), f.mul(to_fe(*a1), i)).0,
            f.add(to_fe(*a2), f.mul(to_fe(*a3), i)).0,
            f.add(f.neg(to_fe(*a2)), f.mul(to_fe(*a3), i)).0,
            f.sub(to_fe(*a0), f.mul(to_fe(*a1), i)).0,
        ];
        mats.push(group.canonicalize(&m)?);
    }
    mats.sort();
    mats.dedup();
    if mats.len() != (p + 1) as usize {
        return Err(LpsError::TooFewSolutions(mats.len()));
    }

    // one representative per inverse pair forms the base list
    let mut base = Vec::new();
    let mut used = vec![false; mats.len()];
    for idx in 0..mats.len() {
        if used[idx] {
            continue;
        }
        used[idx] = true;
        let inv = group.inverse(&mats[idx]);
        if let Some(j) = mats.iter().position(|m| *m == inv) {
            used[j] = true;
        }
        base.push(mats[idx]);
    }

    let gens = GeneratorSet::new(&group, base)?;
    debug_assert_eq!(gens.arity(), (p + 1) as usize);
    let cayley = build_cayley(group, gens)?;
    Ok(LpsInstance { cayley, p, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_quadruples_for_p5() {
        let quads = norm_p_quadruples(5);
        assert_eq!(quads.len(), 6);
        for q in &quads {
            assert_eq!(q.iter().map(|x| x * x).sum::<i64>(), 5);
            assert!(q[0] > 0 && q[0] % 2 == 1);
        }
    }

    #[test]
    fn fourteen_quadruples_for_p13() {
        assert_eq!(norm_p_quadruples(13).len(), 14);
    }

    #[test]
    fn pgl2_f5_has_order_120() {
        let g = ProjectiveLinearGroup::pgl2(5).unwrap();
        assert_eq!(g.elements().len(), 120);
    }

    #[test]
    fn psl2_f5_has_order_60() {
        let g = ProjectiveLinearGroup::psl2(5).unwrap();
        assert_eq!(g.elements().len(), 60);
    }

    #[test]
    fn canonicalize_examples() {
        let g = ProjectiveLinearGroup::pgl2(5).unwrap();
        // scalar matrix is the identity projectively
        assert_eq!(g.canonicalize(&[2, 0, 0, 2]).unwrap(), [1, 0, 0, 1]);
        // scale by 3^{-1} = 2
        assert_eq!(g.canonicalize(&[0, 3, 1, 0]).unwrap(), [0, 1, 2, 0]);
        assert_eq!(g.canonicalize(&[1, 1, 2, 2]).unwrap_err(), LpsError::SingularMatrix);
    }

    #[test]
    fn group_axioms_on_pgl2_f5() {
        let g = ProjectiveLinearGroup::pgl2(5).unwrap();
        let elems = g.elements();
        for a in elems.iter().step_by(7) {
            assert_eq!(g.multiply(a, &g.inverse(a)), g.identity());
            for b in elems.iter().step_by(11) {
                for c in elems.iter().step_by(23) {
                    assert_eq!(
                        g.multiply(&g.multiply(a, b), c),
                        g.multiply(a, &g.multiply(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn lps_5_13_is_pgl2_with_2184_vertices() {
        // 5 is not a quadratic residue mod 13
        let inst = lps_graph(5, 13).unwrap();
        assert!(!inst.cayley.group.is_special());
        assert_eq!(inst.cayley.rim.vertex_count(), 2184); // 12 * 13 * 14
        assert_eq!(inst.cayley.rim.arity(), 6);
        assert_eq!(inst.cayley.rim.petal_count(), 0);
    }

    #[test]
    fn lps_rejects_bad_parameters() {
        assert_eq!(lps_graph(6, 13).unwrap_err(), LpsError::BadCongruence);
        assert_eq!(lps_graph(5, 11).unwrap_err(), LpsError::BadCongruence); // 11 = 3 mod 4
        assert_eq!(lps_graph(5, 5).unwrap_err(), LpsError::BadCongruence);
        assert_eq!(lps_graph(13, 5).unwrap_err(), LpsError::BadCongruence); // q too small
    }

    #[test]
    fn lps_13_17_is_psl2() {
        // 13 = 8^2 mod 17, so the special group appears
        let inst = lps_graph(13, 17).unwrap();
        assert!(inst.cayley.group.is_special());
        assert_eq!(inst.cayley.rim.vertex_count(), 16 * 17 * 18 / 2);
        assert_eq!(inst.cayley.rim.arity(), 14);
    }
}
