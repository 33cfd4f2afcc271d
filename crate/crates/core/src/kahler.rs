//! Complex structure on the fiber, the Kähler form and the Lefschetz-type
//! operators, and projection onto `(p, q)` bigrades.
//!
//! All frame sums run over the full real frame `{X_0, …, X_{2m-1}}`; the `½`
//! in `Ω = ½ e^a ∧ Je_a` and `Λ = ½ i_{JX^a} i_{X_a}` removes the double
//! count, so `Ω(X_0, JX_0) = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{check_half_dim, grade_of, FormFiber, VectorFiber};
use crate::scalar::Scalar;

/// An orthogonal `J` with `J² = -I`, stored as a signed-permutation-style
/// integer matrix acting on frame components: `(JX)_b = Σ_a J[b][a] X_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexStructure {
    m: usize,
    entries: Vec<i64>,
}

impl ComplexStructure {
    /// The flat default: `J X_{2a} = X_{2a+1}`, `J X_{2a+1} = -X_{2a}`.
    pub fn flat(m: usize) -> Result<Self> {
        check_half_dim(m)?;
        let n = 2 * m;
        let mut entries = vec![0; n * n];
        for a in 0..m {
            entries[(2 * a + 1) * n + 2 * a] = 1;
            entries[(2 * a) * n + 2 * a + 1] = -1;
        }
        Ok(Self { m, entries })
    }

    pub fn from_matrix(m: usize, rows: &[Vec<i64>]) -> Result<Self> {
        check_half_dim(m)?;
        let n = 2 * m;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ComplexStructure(format!("expected a {n}x{n} matrix")));
        }
        let cs = Self { m, entries: rows.concat() };
        cs.validate()?;
        Ok(cs)
    }

    fn validate(&self) -> Result<()> {
        let n = 2 * self.m;
        for i in 0..n {
            for j in 0..n {
                let sq: i64 = (0..n).map(|k| self.get(i, k) * self.get(k, j)).sum();
                let gram: i64 = (0..n).map(|k| self.get(k, i) * self.get(k, j)).sum();
                let id = i64::from(i == j);
                if sq != -id {
                    return Err(Error::ComplexStructure("J² ≠ -I".into()));
                }
                if gram != id {
                    return Err(Error::ComplexStructure("J is not orthogonal".into()));
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * 2 * self.m + col]
    }

    pub fn apply<S: Scalar>(&self, x: &VectorFiber<S>) -> VectorFiber<S> {
        let n = 2 * self.m;
        let comps = (0..n)
            .map(|b| {
                (0..n).fold(S::zero(), |acc, a| match self.get(b, a) {
                    0 => acc,
                    c => acc + x.components()[a].clone() * S::from_i64(c),
                })
            })
            .collect();
        VectorFiber::new(self.m, comps).expect("dimension preserved")
    }

    /// Pairs `(u, Ju)` of frame indices forming a `J`-adapted frame, with
    /// the sign `s` such that `J X_u = s X_{Ju}`.
    fn adapted_pairs(&self) -> Vec<(usize, usize, i64)> {
        let n = 2 * self.m;
        let mut used = vec![false; n];
        let mut pairs = Vec::new();
        for u in 0..n {
            if used[u] {
                continue;
            }
            let (v, s) = (0..n)
                .find_map(|b| match self.get(b, u) {
                    0 => None,
                    s => Some((b, s)),
                })
                .expect("J has no zero column");
            used[u] = true;
            used[v] = true;
            pairs.push((u, v, s));
        }
        pairs
    }

    /// Frame indices `u` of the adapted pairs `(X_u, JX_u)`, in order.
    pub fn adapted_frame(&self) -> Vec<usize> {
        self.adapted_pairs().into_iter().map(|(u, _, _)| u).collect()
    }

    fn is_signed_permutation(&self) -> bool {
        let n = 2 * self.m;
        (0..n).all(|c| (0..n).filter(|&r| self.get(r, c) != 0).count() == 1)
    }
}

/// Holomorphic and antiholomorphic degree of a form.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bigrade {
    pub p: usize,
    pub q: usize,
}

impl Bigrade {
    pub fn new(p: usize, q: usize, m: usize) -> Result<Self> {
        if p > m || q > m {
            return Err(Error::InvalidBigrade { p, q, m });
        }
        Ok(Self { p, q })
    }

    /// All bigrades with `0 ≤ p, q ≤ m`.
    pub fn all(m: usize) -> impl Iterator<Item = Self> {
        (0..=m).flat_map(move |p| (0..=m).map(move |q| Self { p, q }))
    }
}

/// Precomputed Kähler data on the fiber for one complex structure.
#[derive(Clone, Debug)]
pub struct Kahler<S: Scalar> {
    m: usize,
    structure: ComplexStructure,
    j_vectors: Vec<VectorFiber<S>>,
    j_forms: Vec<FormFiber<S>>,
    omega: FormFiber<S>,
    /// Frame blade → expansion over `θ`-blades.
    to_eigen: Vec<Vec<(u32, S)>>,
    /// `θ`-blade → expansion over frame blades.
    from_eigen: Vec<Vec<(u32, S)>>,
    /// `(p, q)` of each `θ`-blade mask (even slots holomorphic).
    eigen_bigrade: Vec<(usize, usize)>,
}

impl<S: Scalar> Kahler<S> {
    pub fn new(structure: ComplexStructure) -> Result<Self> {
        let m = structure.m();
        check_half_dim(m)?;
        structure.validate()?;
        if !structure.is_signed_permutation() {
            return Err(Error::ComplexStructure("only signed-permutation J are supported".into()));
        }
        let n = 2 * m;
        let j_vectors: Vec<_> = (0..n).map(|a| structure.apply(&VectorFiber::basis(m, a))).collect();
        let j_forms: Vec<_> = j_vectors.iter().map(VectorFiber::dual).collect();
        let half = S::from_ratio(1, 2);
        let mut omega = FormFiber::zero(m);
        for (a, ja) in j_forms.iter().enumerate() {
            omega.add_assign(&FormFiber::generator(m, a).wedge_raw(ja));
        }
        let omega = omega.scale(&half);

        // θ^k = u^k - i (Ju)^k in slot 2k, θ̄^k = u^k + i (Ju)^k in slot 2k+1.
        let pairs = structure.adapted_pairs();
        let i = S::imag_unit();
        let mut frame_in_eigen = vec![FormFiber::<S>::zero(m); n];
        let mut eigen_in_frame = vec![FormFiber::<S>::zero(m); n];
        for (k, &(u, v, s)) in pairs.iter().enumerate() {
            let s = S::from_i64(s);
            let theta = FormFiber::generator(m, 2 * k);
            let theta_bar = FormFiber::generator(m, 2 * k + 1);
            // e^u = ½(θ + θ̄); s e^v = (Ju)^* = (i/2)(θ - θ̄).
            frame_in_eigen[u] = theta.add(&theta_bar).scale(&half);
            frame_in_eigen[v] = theta.sub(&theta_bar).scale(&(i.clone() * half.clone() * s.clone()));
            let eu = FormFiber::generator(m, u);
            let ev = FormFiber::generator(m, v).scale(&s);
            eigen_in_frame[2 * k] = eu.sub(&ev.scale(&i));
            eigen_in_frame[2 * k + 1] = eu.add(&ev.scale(&i));
        }
        let to_eigen = induced_blade_map(m, &frame_in_eigen);
        let from_eigen = induced_blade_map(m, &eigen_in_frame);
        let eigen_bigrade = (0..1u32 << n)
            .map(|mask| {
                let p = (mask & 0x5555_5555).count_ones() as usize;
                (p, grade_of(mask) - p)
            })
            .collect();

        Ok(Self { m, structure, j_vectors, j_forms, omega, to_eigen, from_eigen, eigen_bigrade })
    }

    pub fn flat(m: usize) -> Result<Self> {
        Self::new(ComplexStructure::flat(m)?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn structure(&self) -> &ComplexStructure {
        &self.structure
    }

    /// `J X_a` for frame vector `a`.
    pub fn j_vector(&self, a: usize) -> &VectorFiber<S> {
        &self.j_vectors[a]
    }

    /// `Je_a`, the metric dual of `J X_a`.
    pub fn j_form(&self, a: usize) -> &FormFiber<S> {
        &self.j_forms[a]
    }

    pub fn apply_j(&self, x: &VectorFiber<S>) -> VectorFiber<S> {
        self.structure.apply(x)
    }

    /// `(X⁺, X⁻) = (½(X - iJX), ½(X + iJX))`.
    pub fn split_pm(&self, x: &VectorFiber<S>) -> Result<(VectorFiber<S>, VectorFiber<S>)> {
        if x.m() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: x.m() });
        }
        let half = S::from_ratio(1, 2);
        let ijx = self.apply_j(x).scale(&S::imag_unit());
        Ok((x.sub(&ijx).scale(&half), x.add(&ijx).scale(&half)))
    }

    /// The Kähler form `Ω`.
    pub fn kahler_form(&self) -> &FormFiber<S> {
        &self.omega
    }

    /// Evaluate a 2-form on a pair of vectors, `ω(X, Y) = i_Y i_X ω`.
    pub fn evaluate_two_form(omega: &FormFiber<S>, x: &VectorFiber<S>, y: &VectorFiber<S>) -> S {
        omega.contract_raw(x).contract_raw(y).coeff(0).clone()
    }

    /// `Lα = Ω ∧ α`.
    pub fn lefschetz(&self, a: &FormFiber<S>) -> FormFiber<S> {
        self.omega.wedge_raw(a)
    }

    /// `Λα = ½ i_{JX^a} i_{X_a} α`.
    pub fn dual_lefschetz(&self, a: &FormFiber<S>) -> FormFiber<S> {
        let mut out = FormFiber::zero(self.m);
        for k in 0..2 * self.m {
            out.add_assign(&a.contract_basis(k).contract_raw(&self.j_vectors[k]));
        }
        out.scale(&S::from_ratio(1, 2))
    }

    /// Complex structure as a derivation: `Jα = Je^a ∧ i_{X_a} α`.
    pub fn j_derivation(&self, a: &FormFiber<S>) -> FormFiber<S> {
        let mut out = FormFiber::zero(self.m);
        for k in 0..2 * self.m {
            out.add_assign(&self.j_forms[k].wedge_raw(&a.contract_basis(k)));
        }
        out
    }

    /// Projection onto `Λ^{p,q}`; bigrades outside `0..=m` give zero.
    pub fn bigrade_project(&self, a: &FormFiber<S>, p: usize, q: usize) -> FormFiber<S> {
        if p > self.m || q > self.m {
            return FormFiber::zero(self.m);
        }
        let mut eigen = FormFiber::<S>::zero(self.m);
        for (mask, c) in a.terms() {
            if grade_of(mask) != p + q {
                continue;
            }
            for (t, w) in &self.to_eigen[mask as usize] {
                if self.eigen_bigrade[*t as usize] == (p, q) {
                    let v = eigen.coeff(*t).clone() + c.clone() * w.clone();
                    eigen.set_coeff(*t, v);
                }
            }
        }
        let mut out = FormFiber::<S>::zero(self.m);
        for (t, c) in eigen.terms() {
            for (mask, w) in &self.from_eigen[t as usize] {
                let v = out.coeff(*mask).clone() + c.clone() * w.clone();
                out.set_coeff(*mask, v);
            }
        }
        out
    }

    /// Checked variant of [`bigrade_project`](Self::bigrade_project).
    pub fn bigrade_project_checked(&self, a: &FormFiber<S>, bg: Bigrade) -> Result<FormFiber<S>> {
        Bigrade::new(bg.p, bg.q, self.m)?;
        Ok(self.bigrade_project(a, bg.p, bg.q))
    }

    /// The bigrade if `a` is nonzero and lies in a single `Λ^{p,q}`.
    pub fn pure_bigrade(&self, a: &FormFiber<S>) -> Option<Bigrade> {
        let g = a.homogeneous_grade()?;
        (0..=g.min(self.m)).filter(|&p| g - p <= self.m).find_map(|p| {
            let part = self.bigrade_project(a, p, g - p);
            (!part.is_zero() && a.sub(&part).is_zero()).then_some(Bigrade { p, q: g - p })
        })
    }

    /// `Λα = 0`.
    pub fn is_primitive(&self, a: &FormFiber<S>) -> bool {
        self.dual_lefschetz(a).is_zero()
    }
}

/// Extend a map on generators to the exterior algebra, blade by blade.
fn induced_blade_map<S: Scalar>(m: usize, images: &[FormFiber<S>]) -> Vec<Vec<(u32, S)>> {
    (0..1u32 << (2 * m))
        .map(|mask| {
            let mut acc = FormFiber::one(m);
            let mut rest = mask;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                acc = acc.wedge_raw(&images[k]);
                rest &= rest - 1;
            }
            acc.terms().map(|(t, c)| (t, c.clone())).collect()
        })
        .collect()
}
