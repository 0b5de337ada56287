//! Butson matrices stored as root-of-unity exponents.
//!
//! Entry `(i, j)` of a [`ButsonMatrix`] with root order `m` stands for
//! `zeta_m^e` where `e = exponent(i, j)`. Indices in this module are 0-based;
//! the CLI reports them 1-based.

use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::cyclotomic::{negate, CyclotomicTester, ExponentCountVector};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ButsonMatrix {
    m: u32,
    n: usize,
    exps: Vec<u32>,
}

impl fmt::Debug for ButsonMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ButsonMatrix(m = {}, n = {})", self.m, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Outcome of [`ButsonMatrix::verify`]. Failures name the lexicographically
/// first non-orthogonal pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub row_failure: Option<(usize, usize)>,
    pub column_failure: Option<(usize, usize)>,
}

/// How [`ButsonMatrix::verify_with`] walks the pair set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

/// Fourier matrix `F_n`: `m = n`, exponent `(i * j) mod n`.
///
/// # Panics
/// Panics if `n == 0`.
pub fn fourier(n: usize) -> ButsonMatrix {
    assert!(n >= 1, "Fourier matrix order must be positive");
    let exps = (0..n * n).map(|c| ((c / n) * (c % n) % n) as u32).collect();
    ButsonMatrix {
        m: n as u32,
        n,
        exps,
    }
}

/// Sylvester Hadamard matrix of order `2^k`, as exponents over `m = 2`.
pub fn sylvester(k: u32) -> ButsonMatrix {
    let n = 1usize << k;
    let exps = (0..n * n)
        .map(|c| ((c / n) & (c % n)).count_ones() % 2)
        .collect();
    ButsonMatrix { m: 2, n, exps }
}

fn first_bad_pair_seq(
    rows: &[u32],
    n: usize,
    m: u32,
    tester: &CyclotomicTester,
) -> Option<(usize, usize)> {
    let mut counts = vec![0u64; m as usize];
    (0..n).find_map(|i| first_bad_partner(rows, n, m, tester, i, &mut counts).map(|j| (i, j)))
}

#[cfg(feature = "parallel")]
fn first_bad_pair_par(
    rows: &[u32],
    n: usize,
    m: u32,
    tester: &CyclotomicTester,
) -> Option<(usize, usize)> {
    (0..n).into_par_iter().find_map_first(|i| {
        let mut counts = vec![0u64; m as usize];
        first_bad_partner(rows, n, m, tester, i, &mut counts).map(|j| (i, j))
    })
}

fn first_bad_partner(
    rows: &[u32],
    n: usize,
    m: u32,
    tester: &CyclotomicTester,
    i: usize,
    counts: &mut [u64],
) -> Option<usize> {
    let a = &rows[i * n..(i + 1) * n];
    (i + 1..n).find(|&j| {
        let b = &rows[j * n..(j + 1) * n];
        counts.iter_mut().for_each(|c| *c = 0);
        for (&x, &y) in a.iter().zip(b) {
            counts[((x + m - y) % m) as usize] += 1;
        }
        !tester.counts_equal(counts, 0)
    })
}

impl ButsonMatrix {
    /// Build from rows, checking shape and exponent range only. Use
    /// [`verify`](Self::verify) for the Butson property.
    pub fn new(m: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Shape(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                r.len()
            )));
        }
        Self::from_flat(m, n, rows.into_iter().flatten().collect())
    }

    pub fn from_flat(m: u32, n: usize, exps: Vec<u32>) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroRootOrder);
        }
        if n == 0 {
            return Err(Error::Shape("matrix order must be positive".into()));
        }
        if exps.len() != n * n {
            return Err(Error::Shape(format!(
                "{} entries for order {n}",
                exps.len()
            )));
        }
        if let Some(&value) = exps.iter().find(|&&e| e >= m) {
            return Err(Error::ExponentOutOfRange { value, m });
        }
        Ok(Self { m, n, exps })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn exponent(&self, i: usize, j: usize) -> u32 {
        self.exps[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.exps[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.n).map(|i| self.exponent(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.exps
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let exps = (0..n * n).map(|c| self.exponent(c % n, c / n)).collect();
        Self { m: self.m, n, exps }
    }

    fn check_perm(&self, perm: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Shape(format!("not a permutation of 0..{}", self.n)));
        }
        Ok(())
    }

    /// New row `i` is old row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        self.check_perm(perm)?;
        let exps = perm
            .iter()
            .flat_map(|&p| self.row(p).iter().copied())
            .collect();
        Ok(Self {
            m: self.m,
            n: self.n,
            exps,
        })
    }

    /// New column `j` is old column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        self.check_perm(perm)?;
        let n = self.n;
        let exps = (0..n * n)
            .map(|c| self.exponent(c / n, perm[c % n]))
            .collect();
        Ok(Self { m: self.m, n, exps })
    }

    /// Exponent multiset of `<row i, row j>`.
    pub fn row_dot(&self, i: usize, j: usize) -> ExponentCountVector {
        crate::cyclotomic::dot_counts(self.row(i), self.row(j), self.m)
            .expect("rows are well formed")
    }

    /// Exact check of `B B* = n I` on rows and columns.
    pub fn verify(&self) -> VerifyReport {
        self.verify_with(Strategy::default())
    }

    pub fn verify_with(&self, strategy: Strategy) -> VerifyReport {
        let tester = CyclotomicTester::new(self.m);
        self.verify_with_tester(strategy, &tester)
    }

    /// Like [`verify_with`](Self::verify_with) with a caller-owned `Phi_m`.
    pub fn verify_with_tester(
        &self,
        strategy: Strategy,
        tester: &CyclotomicTester,
    ) -> VerifyReport {
        assert_eq!(tester.m(), self.m, "tester root order mismatch");
        let transposed = self.transpose();
        let scan = |exps: &[u32]| match strategy {
            Strategy::Sequential => first_bad_pair_seq(exps, self.n, self.m, tester),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => first_bad_pair_par(exps, self.n, self.m, tester),
            #[cfg(not(feature = "parallel"))]
            Strategy::Parallel => first_bad_pair_seq(exps, self.n, self.m, tester),
        };
        let row_failure = scan(&self.exps);
        let column_failure = scan(&transposed.exps);
        VerifyReport {
            ok: row_failure.is_none() && column_failure.is_none(),
            row_failure,
            column_failure,
        }
    }

    pub fn is_butson(&self) -> bool {
        self.verify().ok
    }

    pub fn is_dephased(&self) -> bool {
        self.row(0).iter().all(|&e| e == 0) && (0..self.n).all(|i| self.exponent(i, 0) == 0)
    }

    /// Normalize so the first row and column are all `1`.
    pub fn dephase(&self) -> Self {
        let n = self.n;
        let m = self.m;
        let first_row = self.row(0).to_vec();
        let mut exps = self.exps.clone();
        for (c, e) in exps.iter_mut().enumerate() {
            *e = (*e + m - first_row[c % n]) % m;
        }
        for i in 0..n {
            let lead = exps[i * n];
            for e in &mut exps[i * n..(i + 1) * n] {
                *e = (*e + m - lead) % m;
            }
        }
        Self { m, n, exps }
    }

    /// Dephase, then drop the first row and column.
    pub fn core(&self) -> CoreMatrix {
        let d = self.dephase();
        let k = self.n - 1;
        let exps = (0..k * k)
            .map(|c| d.exponent(c / k + 1, c % k + 1))
            .collect();
        CoreMatrix { m: self.m, k, exps }
    }

    fn require_even_m(&self) -> Result<()> {
        if self.m % 2 != 0 {
            return Err(Error::RequiresEven {
                what: "root order m",
                value: self.m as u64,
            });
        }
        Ok(())
    }

    /// Whether row `s` equals row `t` with every second entry negated
    /// (0-based odd columns).
    pub fn is_c1_pair(&self, t: usize, s: usize) -> bool {
        if self.m % 2 != 0 || self.n % 2 != 0 || t >= self.n || s >= self.n || t == s {
            return false;
        }
        let (a, b) = (self.row(t), self.row(s));
        (0..self.n).all(|j| {
            b[j] == if j % 2 == 1 {
                negate(a[j], self.m)
            } else {
                a[j]
            }
        })
    }

    /// Row pairs `t < s` satisfying C1 in the current column order.
    pub fn find_c1_pairs(&self) -> Result<Vec<(usize, usize)>> {
        self.require_even_m()?;
        if self.n % 2 != 0 {
            return Err(Error::RequiresEven {
                what: "order n",
                value: self.n as u64,
            });
        }
        let n = self.n;
        Ok((0..n)
            .flat_map(|t| (t + 1..n).map(move |s| (t, s)))
            .filter(|&(t, s)| self.is_c1_pair(t, s))
            .collect())
    }

    fn is_sign_vector(&self, v: impl IntoIterator<Item = u32>) -> bool {
        let half = self.m / 2;
        v.into_iter().all(|e| e == 0 || e == half)
    }

    pub fn is_c2_cell(&self, row: usize, col: usize) -> bool {
        self.m % 2 == 0
            && row < self.n
            && col < self.n
            && self.exponent(row, col) == self.m / 2
            && self.is_sign_vector(self.row(row).iter().copied())
            && self.is_sign_vector((0..self.n).map(|i| self.exponent(i, col)))
    }

    /// Cells where a `{1, -1}` row meets a `{1, -1}` column at `-1`, row-major.
    pub fn find_c2_cells(&self) -> Result<Vec<(usize, usize)>> {
        self.require_even_m()?;
        let n = self.n;
        let sign_rows: Vec<usize> = (0..n)
            .filter(|&i| self.is_sign_vector(self.row(i).iter().copied()))
            .collect();
        let sign_cols: Vec<usize> = (0..n)
            .filter(|&j| self.is_sign_vector((0..n).map(|i| self.exponent(i, j))))
            .collect();
        Ok(sign_rows
            .iter()
            .flat_map(|&i| sign_cols.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| self.exponent(i, j) == self.m / 2)
            .collect())
    }

    /// Permute `self` so the C2 row and column sit in slot 1 with the
    /// remaining sign pattern `(+1.., -1..)`, and cut out the trailing
    /// `(n-2) x (n-2)` block.
    ///
    /// Ties are broken by stable partition: every row and column keeps its
    /// original relative order within its class.
    pub fn extract_t(&self, cell: (usize, usize)) -> Result<TExtraction> {
        let (row, col) = cell;
        self.require_even_m()?;
        if self.n % 2 != 0 || self.n < 2 {
            return Err(Error::RequiresEven {
                what: "order n",
                value: self.n as u64,
            });
        }
        if !self.is_c2_cell(row, col) {
            return Err(Error::InvalidC2Cell { row, col });
        }
        if !self.is_dephased() {
            return Err(Error::NotDephased);
        }
        let n = self.n;
        let half = self.m / 2;
        let order_with = |lead: usize, key: &dyn Fn(usize) -> u32| -> Vec<usize> {
            let rest: Vec<usize> = (1..n).filter(|&x| x != lead).collect();
            let plus = rest.iter().copied().filter(|&x| key(x) == 0);
            let minus = rest.iter().copied().filter(|&x| key(x) == half);
            [0, lead].into_iter().chain(plus).chain(minus).collect()
        };
        let col_perm = order_with(col, &|j| self.exponent(row, j));
        let row_perm = order_with(row, &|i| self.exponent(i, col));
        let permuted = self.permute_rows(&row_perm)?.permute_columns(&col_perm)?;
        let k = n - 2;
        let split = k / 2;
        let balanced = |v: Vec<u32>| {
            v[2..2 + split].iter().all(|&e| e == 0) && v[2 + split..].iter().all(|&e| e == half)
        };
        if !balanced(permuted.row(1).to_vec()) || !balanced(permuted.column(1)) {
            return Err(Error::NotButson("C2 row or column is not balanced".into()));
        }
        let t = (0..k * k)
            .map(|c| permuted.exponent(c / k + 2, c % k + 2))
            .collect();
        Ok(TExtraction {
            m: self.m,
            k,
            t,
            row_perm,
            col_perm,
            permuted,
        })
    }
}

/// Dephased matrix with its first row and column removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreMatrix {
    m: u32,
    k: usize,
    exps: Vec<u32>,
}

impl CoreMatrix {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn exponent(&self, i: usize, j: usize) -> u32 {
        self.exps[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.exps[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.k).map(|i| self.row(i).to_vec()).collect()
    }

    /// Every distinct row pair and column pair has inner product `-1`.
    pub fn check_dot_products(&self) -> bool {
        let tester = CyclotomicTester::new(self.m);
        let k = self.k;
        let cols: Vec<Vec<u32>> = (0..k)
            .map(|j| (0..k).map(|i| self.exponent(i, j)).collect())
            .collect();
        let rows = self.rows();
        [rows, cols].iter().all(|vs| {
            (0..k).all(|a| {
                (a + 1..k).all(|b| {
                    let c = crate::cyclotomic::dot_counts(&vs[a], &vs[b], self.m).unwrap();
                    tester.sum_equals(&c, -1)
                })
            })
        })
    }
}

/// The `(n-2) x (n-2)` block `T = [C; D]` cut from a C2-permuted matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TExtraction {
    m: u32,
    k: usize,
    t: Vec<u32>,
    /// New row `i` of [`permuted`](Self::permuted) is row `row_perm[i]` of the input.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub permuted: ButsonMatrix,
}

/// Results of the four block identities satisfied by `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TBlockCheck {
    /// Distinct rows within `C` (and within `D`) have inner product `-2`.
    pub same_half_dot: bool,
    /// Rows of `C` against rows of `D` have inner product `0`.
    pub cross_half_dot: bool,
    /// Each `C` row sums to `-1` over both column halves.
    pub c_half_sums: bool,
    /// Each `D` row sums to `-1` over the first column half and `+1` over the second.
    pub d_half_sums: bool,
}

impl TBlockCheck {
    pub fn all(&self) -> bool {
        self.same_half_dot && self.cross_half_dot && self.c_half_sums && self.d_half_sums
    }
}

impl TExtraction {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Side length `n - 2`.
    pub fn order(&self) -> usize {
        self.k
    }

    /// `(n - 2) / 2`: rows in each of `C`, `D` and columns in each of `T^[1]`, `T^[2]`.
    pub fn split(&self) -> usize {
        self.k / 2
    }

    pub fn exponent(&self, i: usize, j: usize) -> u32 {
        self.t[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.t[i * self.k..(i + 1) * self.k]
    }

    pub fn t_rows(&self) -> Vec<Vec<u32>> {
        (0..self.k).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn c_row(&self, i: usize) -> &[u32] {
        self.row(i)
    }

    pub fn d_row(&self, i: usize) -> &[u32] {
        self.row(self.split() + i)
    }

    pub fn check(&self) -> TBlockCheck {
        let tester = CyclotomicTester::new(self.m);
        let h = self.split();
        let dot = |a: &[u32], b: &[u32], v: i64| {
            tester.sum_equals(&crate::cyclotomic::dot_counts(a, b, self.m).unwrap(), v)
        };
        let sum = |xs: &[u32], v: i64| {
            tester.sum_equals(
                &ExponentCountVector::from_exponents(self.m, xs.iter().copied()).unwrap(),
                v,
            )
        };
        let pairs = || (0..h).flat_map(|a| (a + 1..h).map(move |b| (a, b)));
        TBlockCheck {
            same_half_dot: pairs().all(|(a, b)| {
                dot(self.c_row(a), self.c_row(b), -2) && dot(self.d_row(a), self.d_row(b), -2)
            }),
            cross_half_dot: (0..h).all(|a| (0..h).all(|b| dot(self.c_row(a), self.d_row(b), 0))),
            c_half_sums: (0..h)
                .all(|a| sum(&self.c_row(a)[..h], -1) && sum(&self.c_row(a)[h..], -1)),
            d_half_sums: (0..h)
                .all(|a| sum(&self.d_row(a)[..h], -1) && sum(&self.d_row(a)[h..], 1)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bh(m: u32, rows: &[&[u32]]) -> ButsonMatrix {
        ButsonMatrix::new(m, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn fourier_examples() {
        assert_eq!(
            fourier(3).rows(),
            vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]]
        );
        assert_eq!(fourier(2).rows(), vec![vec![0, 0], vec![0, 1]]);
        assert_eq!(fourier(6).row(3), &[0, 3, 0, 3, 0, 3]);
        assert_eq!(fourier(1).rows(), vec![vec![0]]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            ButsonMatrix::new(3, vec![vec![0, 3], vec![0, 0]]),
            Err(Error::ExponentOutOfRange { .. })
        ));
        assert!(matches!(
            ButsonMatrix::new(3, vec![vec![0, 1], vec![0]]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            ButsonMatrix::new(0, vec![vec![0]]),
            Err(Error::ZeroRootOrder)
        ));
    }

    #[test]
    fn fourier_verifies() {
        for n in 2..=32 {
            assert!(fourier(n).verify().ok, "F_{n}");
        }
        for k in 0..=5 {
            assert!(sylvester(k).verify().ok);
        }
    }

    #[test]
    fn perturbation_is_caught() {
        let mut rows = fourier(3).rows();
        rows[1][1] = 2;
        let report = bh(3, &rows.iter().map(|r| r.as_slice()).collect::<Vec<_>>()).verify();
        assert!(!report.ok);
        assert_eq!(report.row_failure, Some((0, 1)));
        assert_eq!(report.column_failure, Some((0, 1)));
        let seq = bh(3, &rows.iter().map(|r| r.as_slice()).collect::<Vec<_>>())
            .verify_with(Strategy::Sequential);
        assert_eq!(seq, report);
    }

    #[test]
    fn dephase_behaviour() {
        for n in 1..=12 {
            assert_eq!(fourier(n).dephase(), fourier(n));
        }
        let raw = bh(3, &[&[1, 2, 0], &[2, 1, 0], &[0, 0, 0]]);
        let d = raw.dephase();
        assert!(d.is_dephased());
        assert_eq!(d.dephase(), d);
    }

    #[test]
    fn core_examples() {
        assert_eq!(fourier(3).core().rows(), vec![vec![1, 2], vec![2, 1]]);
        for n in 2..=24 {
            let c = fourier(n).core();
            assert!(c.check_dot_products(), "core of F_{n}");
            let t = CyclotomicTester::new(n as u32);
            for i in 0..n - 1 {
                let e = ExponentCountVector::from_exponents(n as u32, c.row(i).iter().copied())
                    .unwrap();
                assert!(t.sum_equals(&e, -1));
            }
        }
    }

    #[test]
    fn c1_pairs_of_fourier() {
        assert_eq!(
            fourier(6).find_c1_pairs().unwrap(),
            vec![(0, 3), (1, 4), (2, 5)]
        );
        assert_eq!(fourier(4).find_c1_pairs().unwrap(), vec![(0, 2), (1, 3)]);
        let no_partner = bh(4, &[&[0, 0], &[0, 2]]).permute_columns(&[1, 0]).unwrap();
        assert_eq!(no_partner.rows(), vec![vec![0, 0], vec![2, 0]]);
        assert!(no_partner.find_c1_pairs().unwrap().is_empty());
        assert!(fourier(5).find_c1_pairs().is_err());
        assert!(fourier(3).find_c1_pairs().is_err());
    }

    #[test]
    fn c2_cells() {
        assert_eq!(fourier(6).find_c2_cells().unwrap(), vec![(3, 3)]);
        assert!(fourier(8).find_c2_cells().unwrap().is_empty());
        assert!(!sylvester(2).find_c2_cells().unwrap().is_empty());
        assert!(fourier(3).find_c2_cells().is_err());
    }

    #[test]
    fn extract_t_on_f6() {
        let x = fourier(6).extract_t((3, 3)).unwrap();
        assert_eq!(
            x.t_rows(),
            vec![
                vec![4, 2, 2, 4],
                vec![2, 4, 4, 2],
                vec![2, 4, 1, 5],
                vec![4, 2, 5, 1]
            ]
        );
        assert_eq!(x.row_perm, vec![0, 3, 2, 4, 1, 5]);
        assert_eq!(x.col_perm, vec![0, 3, 2, 4, 1, 5]);
        assert!(x.check().all());
        assert!(x.permuted.verify().ok);
    }

    #[test]
    fn extract_t_errors() {
        assert!(matches!(
            fourier(6).extract_t((1, 1)),
            Err(Error::InvalidC2Cell { .. })
        ));
        let shifted = fourier(6).permute_rows(&[3, 1, 2, 0, 4, 5]).unwrap();
        assert!(matches!(shifted.extract_t((0, 3)), Err(Error::NotDephased)));
    }

    #[test]
    fn extract_t_on_f10() {
        let f = fourier(10);
        let cells = f.find_c2_cells().unwrap();
        assert_eq!(cells, vec![(5, 5)]);
        assert!(f.extract_t(cells[0]).unwrap().check().all());
    }
}
