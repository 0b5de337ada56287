//! Scarpis-type block constructions.
//!
//! [`phi`] turns order-`n` Butson inputs into `BH(m, n(n-1))` using a
//! complete LSESC tensor set of order `n - 1`. [`psi`] turns order-`n`
//! inputs (`m`, `n` even) satisfying C1 and C2 into `BH(m, n(n/2-1))` using
//! a complete LSESC set of order `n/2 - 1`, inflated by `I_2`.
//!
//! Both take an x-source matrix `G` (rows deleted into the Kronecker block,
//! and the deleted row `x` scaling the column blocks) and a second matrix
//! `H` (core for phi, `T` block for psi). With one input, `G = H`.
//! Every output is re-verified exactly before it is returned.

use num_bigint::BigUint;

use crate::butson::{ButsonMatrix, TExtraction};
use crate::error::{Error, Result};
use crate::latin::{complete_lsesc_set, encode, inflate, is_pairwise_lsesc, LatinTensor};

/// Multiplication of a block by `Diag(x, ..., x)`: adds the exponent of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagonalScale {
    exponent: u32,
    m: u32,
}

impl DiagonalScale {
    pub fn new(exponent: u32, m: u32) -> Self {
        Self {
            exponent: exponent % m,
            m,
        }
    }

    pub fn apply(&self, e: u32) -> u32 {
        (e + self.exponent) % self.m
    }

    /// Scale by the conjugate entry.
    pub fn inverse(&self) -> Self {
        Self::new((self.m - self.exponent) % self.m, self.m)
    }
}

/// Tensors of the built-in complete LSESC set of the given order.
pub fn complete_lsesc_tensors(order: usize) -> Result<Vec<LatinTensor>> {
    Ok(complete_lsesc_set(order)?.iter().map(encode).collect())
}

fn check_tensor_set(tensors: &[LatinTensor], order: usize) -> Result<()> {
    let want = order.saturating_sub(1);
    if tensors.len() != want {
        return Err(Error::Lsesc(format!(
            "expected {want} tensors of order {order}, got {}",
            tensors.len()
        )));
    }
    if let Some(t) = tensors.iter().find(|t| t.order() != order) {
        return Err(Error::Lsesc(format!(
            "tensor of order {} where {order} is required",
            t.order()
        )));
    }
    let squares = tensors
        .iter()
        .map(LatinTensor::reconstruct)
        .collect::<Result<Vec<_>>>()?;
    if !is_pairwise_lsesc(&squares)? {
        return Err(Error::Lsesc("squares are not pairwise LSESC".into()));
    }
    Ok(())
}

fn check_inputs(g: &ButsonMatrix, h: &ButsonMatrix) -> Result<()> {
    if g.m() != h.m() || g.order() != h.order() {
        return Err(Error::Plan(format!(
            "inputs differ: BH({}, {}) vs BH({}, {})",
            g.m(),
            g.order(),
            h.m(),
            h.order()
        )));
    }
    for (name, b) in [("x-source", g), ("second input", h)] {
        let r = b.verify();
        if !r.ok {
            let detail = match (r.row_failure, r.column_failure) {
                (Some((i, j)), _) => {
                    format!("{name}: rows {} and {} are not orthogonal", i + 1, j + 1)
                }
                (_, Some((i, j))) => {
                    format!("{name}: columns {} and {} are not orthogonal", i + 1, j + 1)
                }
                _ => name.to_string(),
            };
            return Err(Error::NotButson(detail));
        }
    }
    Ok(())
}

fn finish(m: u32, size: usize, exps: Vec<u32>) -> Result<ButsonMatrix> {
    let out = ButsonMatrix::from_flat(m, size, exps)?;
    if !out.verify().ok {
        return Err(Error::OutputNotButson);
    }
    Ok(out)
}

/// Inputs to [`phi`].
#[derive(Clone, Debug)]
pub struct PhiPlan {
    /// Matrix whose core fills the column blocks.
    pub h: ButsonMatrix,
    /// Optional second matrix supplying the Kronecker block and deleted row.
    pub g: Option<ButsonMatrix>,
    /// Complete LSESC tensor set of order `n - 1`.
    pub tensors: Vec<LatinTensor>,
    /// Row of the x-source deleted into the diagonal scales (0-based).
    pub deleted_row: usize,
}

impl PhiPlan {
    pub fn new(h: ButsonMatrix, tensors: Vec<LatinTensor>) -> Self {
        Self {
            h,
            g: None,
            tensors,
            deleted_row: 0,
        }
    }

    /// Plan with the built-in LSESC set of order `n - 1`.
    pub fn classical(h: ButsonMatrix) -> Result<Self> {
        let tensors = complete_lsesc_tensors(h.order().saturating_sub(1))?;
        Ok(Self::new(h, tensors))
    }

    pub fn with_x_source(mut self, g: ButsonMatrix) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_deleted_row(mut self, row: usize) -> Self {
        self.deleted_row = row;
        self
    }

    pub fn x_source(&self) -> &ButsonMatrix {
        self.g.as_ref().unwrap_or(&self.h)
    }
}

/// Build `BH(m, n(n-1))`.
pub fn phi(plan: &PhiPlan) -> Result<ButsonMatrix> {
    let g = plan.x_source();
    let h = &plan.h;
    let n = h.order();
    if n < 2 {
        return Err(Error::Plan("phi needs order n >= 2".into()));
    }
    check_inputs(g, h)?;
    check_tensor_set(&plan.tensors, n - 1)?;
    if plan.deleted_row >= n {
        return Err(Error::Plan(format!(
            "deleted row {} out of range",
            plan.deleted_row + 1
        )));
    }

    let m = h.m();
    let w = n - 1;
    let size = n * w;
    let x = g.row(plan.deleted_row);
    let scales: Vec<DiagonalScale> = x.iter().map(|&e| DiagonalScale::new(e, m)).collect();
    let core = h.core();
    let perms: Vec<Vec<Vec<usize>>> = plan
        .tensors
        .iter()
        .map(|t| (0..w).map(|s| t.frontal_permutation(s)).collect())
        .collect();

    let mut exps = Vec::with_capacity(size * size);
    // Kronecker block: the x-source minus the deleted row, each entry repeated w times.
    for r in (0..n).filter(|&r| r != plan.deleted_row) {
        for &e in g.row(r) {
            exps.extend(std::iter::repeat_n(e, w));
        }
    }
    for k in 0..w {
        for j in 0..w {
            exps.extend(core.row(k).iter().map(|&e| scales[0].apply(e)));
            for b in 1..n {
                let src = if k == 0 { j } else { perms[k - 1][b - 1][j] };
                exps.extend(core.row(src).iter().map(|&e| scales[b].apply(e)));
            }
        }
    }
    finish(m, size, exps)
}

/// Inputs to [`psi`].
#[derive(Clone, Debug)]
pub struct PsiPlan {
    /// Matrix satisfying C2; source of the `T` block.
    pub h: ButsonMatrix,
    /// Optional x-source satisfying C1 in its current column order.
    pub g: Option<ButsonMatrix>,
    /// Complete LSESC tensor set of order `n/2 - 1`.
    pub tensors: Vec<LatinTensor>,
    /// C1 pair on the x-source; the first row is `x`. Defaults to the first pair found.
    pub c1_pair: Option<(usize, usize)>,
    /// C2 cell on `h`. Defaults to the first cell found.
    pub c2_cell: Option<(usize, usize)>,
}

impl PsiPlan {
    pub fn new(h: ButsonMatrix, tensors: Vec<LatinTensor>) -> Self {
        Self {
            h,
            g: None,
            tensors,
            c1_pair: None,
            c2_cell: None,
        }
    }

    /// Plan with the built-in LSESC set of order `n/2 - 1`.
    pub fn classical(h: ButsonMatrix) -> Result<Self> {
        let order = (h.order() / 2).saturating_sub(1);
        let tensors = complete_lsesc_tensors(order)?;
        Ok(Self::new(h, tensors))
    }

    pub fn with_x_source(mut self, g: ButsonMatrix) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_c1_pair(mut self, pair: (usize, usize)) -> Self {
        self.c1_pair = Some(pair);
        self
    }

    pub fn with_c2_cell(mut self, cell: (usize, usize)) -> Self {
        self.c2_cell = Some(cell);
        self
    }

    pub fn x_source(&self) -> &ButsonMatrix {
        self.g.as_ref().unwrap_or(&self.h)
    }
}

/// A [`psi`] result together with the choices actually made.
#[derive(Clone, Debug)]
pub struct PsiConstruction {
    pub matrix: ButsonMatrix,
    pub c1_pair: (usize, usize),
    pub c2_cell: (usize, usize),
    pub extraction: TExtraction,
}

/// Build `BH(m, n(n/2-1))`.
pub fn psi(plan: &PsiPlan) -> Result<ButsonMatrix> {
    psi_detailed(plan).map(|c| c.matrix)
}

pub fn psi_detailed(plan: &PsiPlan) -> Result<PsiConstruction> {
    let g = plan.x_source();
    let h = &plan.h;
    let n = h.order();
    let m = h.m();
    if m % 2 != 0 {
        return Err(Error::RequiresEven {
            what: "root order m",
            value: m as u64,
        });
    }
    if n % 2 != 0 || n < 4 {
        return Err(Error::Plan(format!("psi needs even order n >= 4, got {n}")));
    }
    check_inputs(g, h)?;

    let c1_pair = match plan.c1_pair {
        Some((t, s)) if g.is_c1_pair(t.min(s), t.max(s)) => (t, s),
        Some((first, second)) => return Err(Error::InvalidC1Pair { first, second }),
        None => *g.find_c1_pairs()?.first().ok_or(Error::C1Absent)?,
    };
    let c2_cell = match plan.c2_cell {
        Some(cell) => cell,
        None => *h.find_c2_cells()?.first().ok_or(Error::C2Absent)?,
    };
    let half = n / 2 - 1;
    check_tensor_set(&plan.tensors, half)?;
    let extraction = h.extract_t(c2_cell)?;

    let w = 2 * half;
    let size = n * half;
    let x = g.row(c1_pair.0);
    let scales: Vec<DiagonalScale> = x.iter().map(|&e| DiagonalScale::new(e, m)).collect();
    let perms: Vec<Vec<Vec<usize>>> = plan
        .tensors
        .iter()
        .map(|t| {
            let y = inflate(t, 2);
            (0..half).map(|s| y.frontal_permutation(s)).collect()
        })
        .collect();

    let mut exps = Vec::with_capacity(size * size);
    for r in (0..n).filter(|&r| r != c1_pair.0 && r != c1_pair.1) {
        for &e in g.row(r) {
            exps.extend(std::iter::repeat_n(e, half));
        }
    }
    // Row `src` of T with its two column halves scaled by `left` and `right`.
    let scaled_row =
        |exps: &mut Vec<u32>, src: usize, left: &DiagonalScale, right: &DiagonalScale| {
            let row = extraction.row(src);
            exps.extend(row[..half].iter().map(|&e| left.apply(e)));
            exps.extend(row[half..].iter().map(|&e| right.apply(e)));
        };
    for k in 0..half {
        for r in 0..w {
            let lead = if r < half { k } else { half + k };
            scaled_row(&mut exps, lead, &scales[0], &scales[1]);
            for b in 1..=half {
                let src = if k == 0 { r } else { perms[k - 1][b - 1][r] };
                scaled_row(&mut exps, src, &scales[2 * b], &scales[2 * b + 1]);
            }
        }
    }
    let matrix = finish(m, size, exps)?;
    Ok(PsiConstruction {
        matrix,
        c1_pair,
        c2_cell,
        extraction,
    })
}

/// Largest `r` accepted by [`corollary5`]: `2^r` must not exceed the
/// classical LSESC order cap.
pub const COROLLARY5_MAX_R: u32 = 12;

/// `BH(2(2^r+1), 2^(r+1)(2^r+1))` from `psi` on `F_{2(2^r+1)}` with the
/// classical LSESC set over `GF(2^r)`.
pub fn corollary5(r: u32) -> Result<ButsonMatrix> {
    if r == 0 || r > COROLLARY5_MAX_R {
        return Err(Error::SizeCap {
            size: r as u64,
            cap: COROLLARY5_MAX_R as u64,
        });
    }
    let q = 1usize << r;
    let h = crate::butson::fourier(2 * (q + 1));
    psi(&PsiPlan::classical(h)?)
}

/// `mols * bh^2 * n`.
pub fn count_phi_outputs(mols_count: u64, bh_count: u64, n: u64) -> BigUint {
    BigUint::from(mols_count) * BigUint::from(bh_count) * BigUint::from(bh_count) * BigUint::from(n)
}

/// `sum over d_H of mols * a2 * d_H`.
pub fn count_psi_outputs(mols_count: u64, a2_count: u64, dh_values: &[u64]) -> BigUint {
    dh_values
        .iter()
        .map(|&d| BigUint::from(mols_count) * BigUint::from(a2_count) * BigUint::from(d))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::butson::{fourier, sylvester};

    #[test]
    fn diagonal_scale_inverse() {
        let d = DiagonalScale::new(2, 6);
        for e in 0..6 {
            assert_eq!(d.inverse().apply(d.apply(e)), e);
        }
    }

    #[test]
    fn phi_f3_raw_rows() {
        let out = phi(&PhiPlan::classical(fourier(3)).unwrap()).unwrap();
        assert_eq!(out.order(), 6);
        assert_eq!(out.row(0), &[0, 0, 1, 1, 2, 2]);
        assert_eq!(out.row(1), &[0, 0, 2, 2, 1, 1]);
        assert_eq!(out.row(2), &[1, 2, 1, 2, 1, 2]);
        assert_eq!(out.row(3), &[1, 2, 2, 1, 2, 1]);
        assert_eq!(out.row(4), &[2, 1, 1, 2, 2, 1]);
        assert_eq!(out.row(5), &[2, 1, 2, 1, 1, 2]);
    }

    #[test]
    fn phi_f3_dephased_golden() {
        let out = phi(&PhiPlan::classical(fourier(3)).unwrap())
            .unwrap()
            .dephase();
        let expected = vec![
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 0, 1, 1, 2, 2],
            vec![0, 1, 2, 0, 1, 2],
            vec![0, 1, 0, 2, 2, 1],
            vec![0, 2, 1, 2, 1, 0],
            vec![0, 2, 2, 1, 0, 1],
        ];
        assert_eq!(out.rows(), expected);
    }

    #[test]
    fn phi_f5_all_rows() {
        for t in 0..5 {
            let out = phi(&PhiPlan::classical(fourier(5)).unwrap().with_deleted_row(t)).unwrap();
            assert_eq!((out.m(), out.order()), (5, 20));
        }
    }

    #[test]
    fn phi_rejects_bad_plans() {
        let mut plan = PhiPlan::classical(fourier(5)).unwrap();
        plan.tensors.pop();
        assert!(matches!(phi(&plan), Err(Error::Lsesc(_))));
        let mut plan = PhiPlan::classical(fourier(5)).unwrap();
        plan.tensors[1] = plan.tensors[0].clone();
        assert!(matches!(phi(&plan), Err(Error::Lsesc(_))));
        let plan = PhiPlan::classical(fourier(3)).unwrap().with_deleted_row(3);
        assert!(matches!(phi(&plan), Err(Error::Plan(_))));
        let broken =
            ButsonMatrix::new(3, vec![vec![0, 0, 0], vec![0, 2, 2], vec![0, 2, 1]]).unwrap();
        let plan = PhiPlan::classical(broken).unwrap();
        assert!(matches!(phi(&plan), Err(Error::NotButson(_))));
        assert!(matches!(
            PhiPlan::classical(fourier(7)),
            Err(Error::LsescUnavailable(6))
        ));
    }

    #[test]
    fn phi_degenerate_order_two() {
        let out = phi(&PhiPlan::classical(fourier(2)).unwrap()).unwrap();
        assert_eq!(out.order(), 2);
    }

    #[test]
    fn psi_f6_golden_first_row() {
        let c = psi_detailed(&PsiPlan::classical(fourier(6)).unwrap()).unwrap();
        assert_eq!(c.c1_pair, (0, 3));
        assert_eq!(c.c2_cell, (3, 3));
        assert_eq!(c.matrix.order(), 12);
        assert_eq!(c.matrix.row(0), &[0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5]);
    }

    #[test]
    fn psi_requires_c2() {
        assert!(matches!(
            psi(&PsiPlan::classical(fourier(8)).unwrap()),
            Err(Error::C2Absent)
        ));
        let plan = PsiPlan::classical(fourier(6)).unwrap().with_c1_pair((0, 1));
        assert!(matches!(psi(&plan), Err(Error::InvalidC1Pair { .. })));
    }

    #[test]
    fn psi_any_c1_pair_of_f10() {
        for pair in fourier(10).find_c1_pairs().unwrap() {
            let out = psi(&PsiPlan::classical(fourier(10)).unwrap().with_c1_pair(pair)).unwrap();
            assert_eq!((out.m(), out.order()), (10, 40));
        }
    }

    #[test]
    fn two_input_forms_degenerate() {
        let h = fourier(5);
        let one = phi(&PhiPlan::classical(h.clone()).unwrap()).unwrap();
        let two = phi(&PhiPlan::classical(h.clone()).unwrap().with_x_source(h)).unwrap();
        assert_eq!(one, two);
        let h = fourier(6);
        let one = psi(&PsiPlan::classical(h.clone()).unwrap()).unwrap();
        let two = psi(&PsiPlan::classical(h.clone()).unwrap().with_x_source(h)).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn hadamard_inputs_stay_hadamard() {
        let out = phi(&PhiPlan::classical(sylvester(2)).unwrap()).unwrap();
        assert_eq!((out.m(), out.order()), (2, 12));
        let out = psi(&PsiPlan::classical(sylvester(3)).unwrap()).unwrap();
        assert_eq!((out.m(), out.order()), (2, 24));
        assert!(out.as_flat().iter().all(|&e| e <= 1));
    }

    #[test]
    fn corollary5_small() {
        assert_eq!(
            corollary5(1).unwrap(),
            psi(&PsiPlan::classical(fourier(6)).unwrap()).unwrap()
        );
        let b = corollary5(2).unwrap();
        assert_eq!((b.m(), b.order()), (10, 40));
        assert!(corollary5(0).is_err());
        assert!(corollary5(13).is_err());
    }

    #[test]
    fn counting_formulas() {
        assert_eq!(count_phi_outputs(1, 1, 4), BigUint::from(4u32));
        assert_eq!(count_phi_outputs(1, 2, 4), BigUint::from(16u32));
        assert_eq!(count_phi_outputs(0, 9, 4), BigUint::from(0u32));
        // one normalized-order-4 class, but many labelled matrices: well over 24 outputs
        assert!(count_phi_outputs(1, 24, 4) > BigUint::from(24u32));
        let dh = fourier(6).find_c1_pairs().unwrap().len() as u64;
        assert_eq!(count_psi_outputs(1, 1, &[dh]), BigUint::from(3u32));
        assert_eq!(count_psi_outputs(1, 1, &[]), BigUint::from(0u32));
        assert_eq!(count_psi_outputs(2, 3, &[1, 2]), BigUint::from(18u32));
    }
}
