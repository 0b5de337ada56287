//! Latin squares, the LSESC and MOLS relations, and cubic tensor encodings.
//!
//! Symbols are always `1..=n`. Two squares `L`, `L'` are LSESC when every
//! row pair `(i, i')` agrees (`l[i][j] == l'[i'][j]`) in exactly one column.
//! Swapping row index and symbol maps LSESC families to MOLS families and
//! back.

use crate::error::{Error, Result};
use crate::galois::{field_of_order, prime_power};

/// Largest order accepted by [`classical_lsesc_set`].
pub const CLASSICAL_ORDER_CAP: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u32>,
}

fn check_entries(rows: &[Vec<u32>]) -> Result<usize> {
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedLatin(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        if let Some(&bad) = row.iter().find(|&&v| v == 0 || v as usize > n) {
            return Err(Error::MalformedLatin(format!(
                "symbol {bad} outside 1..={n}"
            )));
        }
    }
    Ok(n)
}

fn latin_property(n: usize, cell: impl Fn(usize, usize) -> u32) -> bool {
    let mut seen = vec![false; n + 1];
    for i in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for j in 0..n {
            let v = cell(i, j) as usize;
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        seen.iter_mut().for_each(|s| *s = false);
        for j in 0..n {
            let v = cell(j, i) as usize;
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
    }
    true
}

/// Whether `rows` is a Latin square over `1..=n`. Errors if the array is not
/// square or has symbols outside `1..=n`.
pub fn is_latin(rows: &[Vec<u32>]) -> Result<bool> {
    let n = check_entries(rows)?;
    Ok(latin_property(n, |i, j| rows[i][j]))
}

impl LatinSquare {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        if !is_latin(&rows)? {
            return Err(Error::MalformedLatin(
                "a symbol repeats in a row or column".into(),
            ));
        }
        let n = rows.len();
        Ok(Self {
            n,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_flat(n: usize, cells: Vec<u32>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::MalformedLatin(format!(
                "{} cells for order {n}",
                cells.len()
            )));
        }
        Self::new(cells.chunks(n.max(1)).map(<[u32]>::to_vec).collect())
    }

    /// The cyclic square `l[i][j] = (i + j) mod n + 1`.
    pub fn cyclic(n: usize) -> Self {
        let cells = (0..n * n)
            .map(|c| ((c / n + c % n) % n + 1) as u32)
            .collect();
        Self { n, cells }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Symbol at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.cells[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Exchange row index and symbol: `l'[a][j] = i` whenever `l[i][j] = a`.
    pub fn conjugate(&self) -> Self {
        let n = self.n;
        let mut cells = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j) as usize - 1;
                cells[a * n + j] = i as u32 + 1;
            }
        }
        Self { n, cells }
    }

    /// Apply symbol relabeling `s -> perm[s - 1]` (values in `1..=n`).
    pub fn relabel(&self, perm: &[u32]) -> Self {
        let cells = self.cells.iter().map(|&s| perm[s as usize - 1]).collect();
        Self { n: self.n, cells }
    }

    /// Permute columns: new column `j` is old column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let cells = (0..n * n).map(|c| self.get(c / n, perm[c % n])).collect();
        Self { n, cells }
    }

    /// Permute rows: new row `i` is old row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let cells = (0..n * n).map(|c| self.get(perm[c / n], c % n)).collect();
        Self { n, cells }
    }
}

fn same_order(a: &LatinSquare, b: &LatinSquare) -> Result<usize> {
    if a.n != b.n {
        return Err(Error::OrderMismatch(a.n, b.n));
    }
    Ok(a.n)
}

/// Every row pair `(i, i')` agrees in exactly one column.
pub fn are_lsesc(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    let n = same_order(a, b)?;
    Ok((0..n).all(|i| {
        (0..n).all(|k| {
            a.row(i)
                .iter()
                .zip(b.row(k))
                .filter(|(x, y)| x == y)
                .count()
                == 1
        })
    }))
}

/// All `n^2` superimposed symbol pairs are distinct.
pub fn are_mols(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    let n = same_order(a, b)?;
    let mut seen = vec![false; n * n];
    for (&x, &y) in a.cells.iter().zip(&b.cells) {
        let slot = (x as usize - 1) * n + (y as usize - 1);
        if std::mem::replace(&mut seen[slot], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pairwise(
    squares: &[LatinSquare],
    rel: fn(&LatinSquare, &LatinSquare) -> Result<bool>,
) -> Result<bool> {
    for (i, a) in squares.iter().enumerate() {
        for b in &squares[i + 1..] {
            if !rel(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_pairwise_lsesc(squares: &[LatinSquare]) -> Result<bool> {
    pairwise(squares, are_lsesc)
}

pub fn is_pairwise_mols(squares: &[LatinSquare]) -> Result<bool> {
    pairwise(squares, are_mols)
}

/// The `q - 1` squares `l_b[i][j] = x_i + b x_j` over `GF(q)`, one per
/// nonzero `b` in enumeration order.
pub fn classical_lsesc_set(q: u64) -> Result<Vec<LatinSquare>> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q));
    }
    if q > CLASSICAL_ORDER_CAP {
        return Err(Error::SizeCap {
            size: q,
            cap: CLASSICAL_ORDER_CAP,
        });
    }
    let field = field_of_order(q)?;
    let els = field.enumerate_elements();
    let n = els.len();
    Ok(els[1..]
        .iter()
        .map(|b| {
            let scaled: Vec<_> = els.iter().map(|x| field.mul(b, x)).collect();
            let cells = (0..n * n)
                .map(|c| field.index_of(&field.add(&els[c / n], &scaled[c % n])) as u32 + 1)
                .collect();
            LatinSquare { n, cells }
        })
        .collect())
}

/// A complete (size `n - 1`) pairwise-LSESC family of order `n`, for any
/// order that has one built in: `n = 1` (empty family) or a prime power.
pub fn complete_lsesc_set(n: usize) -> Result<Vec<LatinSquare>> {
    match n {
        0 => Err(Error::LsescUnavailable(0)),
        1 => Ok(Vec::new()),
        _ if prime_power(n as u64).is_some() => classical_lsesc_set(n as u64),
        _ => Err(Error::LsescUnavailable(n)),
    }
}

/// All Latin squares of order `n` in lexicographic row-major cell order.
pub fn all_latin_squares(n: usize) -> Vec<LatinSquare> {
    fn fill(n: usize, pos: usize, cells: &mut Vec<u32>, out: &mut Vec<LatinSquare>) {
        if pos == n * n {
            out.push(LatinSquare {
                n,
                cells: cells.clone(),
            });
            return;
        }
        let (i, j) = (pos / n, pos % n);
        for s in 1..=n as u32 {
            let clash =
                (0..j).any(|c| cells[i * n + c] == s) || (0..i).any(|r| cells[r * n + j] == s);
            if !clash {
                cells.push(s);
                fill(n, pos + 1, cells, out);
                cells.pop();
            }
        }
    }
    let mut out = Vec::new();
    fill(n, 0, &mut Vec::with_capacity(n * n), &mut out);
    out
}

/// Brute-force search for a pairwise-LSESC family of `n - 1` squares, for
/// `1 <= n <= 4`. Returns the first family in lexicographic order.
pub fn exhaustive_complete_lsesc(n: usize) -> Result<Option<Vec<LatinSquare>>> {
    if n == 0 || n > 4 {
        return Err(Error::SizeCap {
            size: n as u64,
            cap: 4,
        });
    }
    let all = all_latin_squares(n);
    fn extend(all: &[LatinSquare], want: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == want {
            return true;
        }
        for idx in start..all.len() {
            let ok = chosen
                .iter()
                .all(|&c| are_lsesc(&all[c], &all[idx]).unwrap_or(false));
            if ok {
                chosen.push(idx);
                if extend(all, want, idx + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    Ok(extend(&all, n - 1, 0, &mut chosen)
        .then(|| chosen.iter().map(|&i| all[i].clone()).collect()))
}

/// Cubic 0/1 tensor stored as `n` frontal slices, entry `(i, j, k)` at
/// `data[(k * n + i) * n + j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatinTensor {
    n: usize,
    data: Vec<u8>,
}

/// Frontal slice `X_k` has a 1 in row `i`, column `l[i][k]`.
pub fn encode(square: &LatinSquare) -> LatinTensor {
    let n = square.n;
    let mut data = vec![0u8; n * n * n];
    for k in 0..n {
        for i in 0..n {
            let j = square.get(i, k) as usize - 1;
            data[(k * n + i) * n + j] = 1;
        }
    }
    LatinTensor { n, data }
}

fn is_permutation_matrix(n: usize, entry: impl Fn(usize, usize) -> u8) -> bool {
    (0..n).all(|i| (0..n).map(|j| entry(i, j) as usize).sum::<usize>() == 1)
        && (0..n).all(|j| (0..n).map(|i| entry(i, j) as usize).sum::<usize>() == 1)
}

impl LatinTensor {
    /// Build from frontal slices and check every slice invariant.
    pub fn from_frontal_slices(slices: &[Vec<Vec<u8>>]) -> Result<Self> {
        let n = slices.len();
        let mut data = Vec::with_capacity(n * n * n);
        for s in slices {
            if s.len() != n || s.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidTensor(format!("slices must be {n} x {n}")));
            }
            for row in s {
                if row.iter().any(|&v| v > 1) {
                    return Err(Error::InvalidTensor("entries must be 0 or 1".into()));
                }
                data.extend_from_slice(row);
            }
        }
        let t = Self { n, data };
        t.check_invariants()?;
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Entry `(i, j, k)`: row `i`, column `j` of frontal slice `k`.
    pub fn entry(&self, i: usize, j: usize, k: usize) -> u8 {
        self.data[(k * self.n + i) * self.n + j]
    }

    pub fn frontal_slice(&self, k: usize) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j, k)).collect())
            .collect()
    }

    /// Slice with fixed first index, indexed `[j][k]`.
    pub fn horizontal_slice(&self, i: usize) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|j| (0..self.n).map(|k| self.entry(i, j, k)).collect())
            .collect()
    }

    /// Slice with fixed second index, indexed `[i][k]`.
    pub fn lateral_slice(&self, j: usize) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.entry(i, j, k)).collect())
            .collect()
    }

    /// Column of the 1 in each row of frontal slice `k`.
    ///
    /// # Panics
    /// Panics if the slice has an empty row (not possible for valid tensors).
    pub fn frontal_permutation(&self, k: usize) -> Vec<usize> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .position(|j| self.entry(i, j, k) == 1)
                    .expect("row without a 1")
            })
            .collect()
    }

    /// Frontal, horizontal and lateral slices are each families of pairwise
    /// disjoint permutation matrices.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        let fail = |what: &str| {
            Err(Error::InvalidTensor(format!(
                "{what} slices are not disjoint permutation matrices"
            )))
        };
        // Disjoint permutation families of size n cover every position once.
        let frontal = (0..n).all(|k| is_permutation_matrix(n, |i, j| self.entry(i, j, k)))
            && is_permutation_matrix_cover(n, |i, j| (0..n).map(|k| self.entry(i, j, k)).sum());
        if !frontal {
            return fail("frontal");
        }
        let horizontal = (0..n).all(|i| is_permutation_matrix(n, |j, k| self.entry(i, j, k)))
            && is_permutation_matrix_cover(n, |j, k| (0..n).map(|i| self.entry(i, j, k)).sum());
        if !horizontal {
            return fail("horizontal");
        }
        let lateral = (0..n).all(|j| is_permutation_matrix(n, |i, k| self.entry(i, j, k)))
            && is_permutation_matrix_cover(n, |i, k| (0..n).map(|j| self.entry(i, j, k)).sum());
        if !lateral {
            return fail("lateral");
        }
        Ok(())
    }

    /// Recover the square as `sum_t t * X_{:t:}` over lateral slices.
    pub fn reconstruct(&self) -> Result<LatinSquare> {
        self.check_invariants()?;
        let n = self.n;
        let mut cells = vec![0u32; n * n];
        for t in 0..n {
            for (i, row) in self.lateral_slice(t).iter().enumerate() {
                for (k, &v) in row.iter().enumerate() {
                    cells[i * n + k] += (t as u32 + 1) * v as u32;
                }
            }
        }
        LatinSquare::from_flat(n, cells)
    }

    /// Reorder frontal slices: new slice `k` is old slice `perm[k]`.
    pub fn permute_frontal(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity(self.data.len());
        for &k in perm {
            data.extend_from_slice(&self.data[k * n * n..(k + 1) * n * n]);
        }
        Self { n, data }
    }

    /// Reorder lateral slices: new slice `j` is old slice `perm[j]`.
    pub fn permute_lateral(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut data = vec![0u8; self.data.len()];
        for k in 0..n {
            for i in 0..n {
                for (j, &src) in perm.iter().enumerate() {
                    data[(k * n + i) * n + j] = self.entry(i, src, k);
                }
            }
        }
        Self { n, data }
    }
}

fn is_permutation_matrix_cover(n: usize, total: impl Fn(usize, usize) -> u8) -> bool {
    (0..n).all(|a| (0..n).all(|b| total(a, b) == 1))
}

/// Tensor with frontal slices `I_factor (x) X_k`, each `(factor n) x (factor n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InflatedTensor {
    factor: usize,
    base: LatinTensor,
}

pub fn inflate(tensor: &LatinTensor, factor: usize) -> InflatedTensor {
    InflatedTensor {
        factor,
        base: tensor.clone(),
    }
}

impl InflatedTensor {
    pub fn factor(&self) -> usize {
        self.factor
    }

    pub fn slice_count(&self) -> usize {
        self.base.n
    }

    pub fn slice_size(&self) -> usize {
        self.factor * self.base.n
    }

    pub fn base(&self) -> &LatinTensor {
        &self.base
    }

    pub fn frontal_slice(&self, k: usize) -> Vec<Vec<u8>> {
        let n = self.base.n;
        let size = self.slice_size();
        let mut out = vec![vec![0u8; size]; size];
        for b in 0..self.factor {
            for i in 0..n {
                for j in 0..n {
                    out[b * n + i][b * n + j] = self.base.entry(i, j, k);
                }
            }
        }
        out
    }

    pub fn frontal_permutation(&self, k: usize) -> Vec<usize> {
        let n = self.base.n;
        let inner = self.base.frontal_permutation(k);
        (0..self.factor)
            .flat_map(|b| inner.iter().map(move |&j| b * n + j))
            .collect()
    }
}
