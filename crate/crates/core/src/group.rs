//! Finite groups and exact U(1)-valued cochains.
//!
//! Phases are stored as rational angles in `[0, 1)`, so every identity in this
//! module is checked without tolerances.

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use rand::Rng;

use crate::error::{invalid, Error, Result};

/// A finite group given by its multiplication table. Element `0` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates `table` as a group law with identity at index 0.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(invalid("group table is empty"));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!("row {g} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(invalid(format!("row {g} references element {bad} >= {n}")));
            }
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(invalid(format!("element 0 is not a two-sided identity at {g}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(invalid(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inverse[g] = h,
                None => return Err(invalid(format!("element {g} has no inverse"))),
            }
        }
        Ok(Self { table, inverse })
    }

    /// The cyclic group Z_n under addition mod n.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("cyclic group order must be positive"));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table)
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// One row per line, entries separated by spaces.
    pub fn to_table_text(&self) -> String {
        let mut out = String::new();
        for row in &self.table {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_table_text(text: &str) -> Result<Self> {
        let mut table = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|e| Error::Parse {
                        line: lineno + 1,
                        column: 1,
                        message: format!("bad element index {t:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        Self::from_table(table)
    }
}

/// An element of U(1) written as `exp(2πi·angle)` with rational angle in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Rational64);

impl Phase {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "phase denominator must be nonzero");
        Self::from_angle(Rational64::new(numer, denom))
    }

    pub fn from_angle(angle: Rational64) -> Self {
        let (n, d) = (*angle.numer(), *angle.denom());
        Phase(Rational64::new(n.rem_euclid(d), d))
    }

    pub fn one() -> Self {
        Phase(Rational64::zero())
    }

    pub fn angle(&self) -> Rational64 {
        self.0
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    pub fn inv(self) -> Self {
        Self::from_angle(-self.0)
    }

    pub fn pow(self, k: i64) -> Self {
        Self::from_angle(self.0 * Rational64::from_integer(k))
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        let theta = std::f64::consts::TAU * (*self.0.numer() as f64) / (*self.0.denom() as f64);
        num_complex::Complex64::from_polar(1.0, theta)
    }

    /// Nearest phase whose denominator divides `denom`, provided it lies within
    /// `tol` of `z` (which must have modulus close to 1).
    pub fn snap(z: num_complex::Complex64, denom: i64, tol: f64) -> Option<Self> {
        if (z.norm() - 1.0).abs() > tol {
            return None;
        }
        let turns = z.arg() / std::f64::consts::TAU;
        let p = (turns * denom as f64).round() as i64;
        let phase = Phase::new(p, denom);
        ((phase.to_complex() - z).norm() <= tol).then_some(phase)
    }
}

impl Mul for Phase {
    type Output = Phase;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Phase) -> Phase {
        Phase::from_angle(self.0 + rhs.0)
    }
}

impl Div for Phase {
    type Output = Phase;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Phase) -> Phase {
        Phase::from_angle(self.0 - rhs.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({self})")
    }
}

impl FromStr for Phase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: String| Error::Parse { line: 1, column: 1, message: m };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad(format!("bad phase numerator in {s:?}")))?;
        let d: i64 = d.parse().map_err(|_| bad(format!("bad phase denominator in {s:?}")))?;
        if d == 0 {
            return Err(bad(format!("zero denominator in {s:?}")));
        }
        Ok(Phase::new(n, d))
    }
}

/// A normalized phase-valued function on G^k, k ∈ {1, 2, 3}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    order: usize,
    values: Vec<Phase>,
}

impl Cochain {
    pub fn trivial(group: &FiniteGroup, degree: usize) -> Result<Self> {
        Self::from_fn(group, degree, |_| Phase::one())
    }

    /// Builds a cochain pointwise and checks normalization.
    pub fn from_fn(
        group: &FiniteGroup,
        degree: usize,
        f: impl Fn(&[usize]) -> Phase,
    ) -> Result<Self> {
        if !(1..=3).contains(&degree) {
            return Err(invalid(format!("cochain degree must be 1, 2 or 3, got {degree}")));
        }
        let order = group.order();
        let len = order.pow(degree as u32);
        let mut args = vec![0usize; degree];
        let mut values = Vec::with_capacity(len);
        for idx in 0..len {
            unflatten(idx, order, &mut args);
            values.push(f(&args));
        }
        let c = Self { degree, order, values };
        c.check_normalized()?;
        Ok(c)
    }

    fn check_normalized(&self) -> Result<()> {
        let mut args = vec![0usize; self.degree];
        for (idx, v) in self.values.iter().enumerate() {
            unflatten(idx, self.order, &mut args);
            if args.contains(&0) && !v.is_one() {
                return Err(invalid(format!(
                    "cochain is not normalized: value {v} at {args:?}"
                )));
            }
        }
        Ok(())
    }

    /// Random normalized cochain with angle denominators dividing `denom`.
    pub fn random<R: Rng + ?Sized>(
        group: &FiniteGroup,
        degree: usize,
        denom: i64,
        rng: &mut R,
    ) -> Result<Self> {
        let order = group.order();
        let len = order.pow(degree as u32);
        let mut args = vec![0usize; degree];
        let mut values = Vec::with_capacity(len);
        for idx in 0..len {
            unflatten(idx, order, &mut args);
            values.push(if args.contains(&0) {
                Phase::one()
            } else {
                Phase::new(rng.random_range(0..denom), denom)
            });
        }
        Ok(Self { degree, order, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn get(&self, args: &[usize]) -> Phase {
        debug_assert_eq!(args.len(), self.degree);
        self.values[flatten(args, self.order)]
    }

    pub fn values(&self) -> &[Phase] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Phase::is_one)
    }

    /// Least common multiple of all angle denominators.
    pub fn denominator_lcm(&self) -> i64 {
        self.values.iter().fold(1, |acc, p| acc.lcm(&p.denom()))
    }

    fn zip_with(&self, other: &Cochain, f: impl Fn(Phase, Phase) -> Phase) -> Result<Cochain> {
        if self.degree != other.degree || self.order != other.order {
            return Err(invalid("cochain shapes differ"));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Cochain { degree: self.degree, order: self.order, values })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Pointwise quotient.
    pub fn div(&self, other: &Cochain) -> Result<Cochain> {
        self.zip_with(other, |a, b| a / b)
    }

    pub fn inverse(&self) -> Cochain {
        Cochain {
            degree: self.degree,
            order: self.order,
            values: self.values.iter().map(|p| p.inv()).collect(),
        }
    }

    /// Lines of the form `g,h,k = p/q` in lexicographic tuple order.
    pub fn to_table_text(&self) -> String {
        let mut out = String::new();
        let mut args = vec![0usize; self.degree];
        for (idx, v) in self.values.iter().enumerate() {
            unflatten(idx, self.order, &mut args);
            let key: Vec<String> = args.iter().map(|a| a.to_string()).collect();
            out.push_str(&format!("{} = {}\n", key.join(","), v));
        }
        out
    }

    /// Parses the table format; tuples that are not listed are trivial.
    pub fn from_table_text(group: &FiniteGroup, degree: usize, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |m: String| Error::Parse { line: lineno + 1, column: 1, message: m };
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| perr(format!("expected `tuple = p/q`, got {line:?}")))?;
            let args = parse_tuple(key).map_err(perr)?;
            let phase: Phase = val.parse().map_err(|_| perr(format!("bad phase {val:?}")))?;
            entries.push((args, phase));
        }
        Self::from_entries(group, degree, &entries)
    }

    /// Cochain from explicit `(tuple, phase)` pairs; unlisted tuples are trivial.
    pub fn from_entries(
        group: &FiniteGroup,
        degree: usize,
        entries: &[(Vec<usize>, Phase)],
    ) -> Result<Self> {
        let mut c = Self::trivial(group, degree)?;
        for (args, phase) in entries {
            if args.len() != degree || args.iter().any(|&a| a >= group.order()) {
                return Err(invalid(format!("bad cochain key {args:?}")));
            }
            c.values[flatten(args, c.order)] = *phase;
        }
        c.check_normalized()?;
        Ok(c)
    }
}

pub(crate) fn parse_tuple(key: &str) -> std::result::Result<Vec<usize>, String> {
    key.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad index {t:?} in {key:?}")))
        .collect()
}

fn flatten(args: &[usize], order: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * order + a)
}

fn unflatten(mut idx: usize, order: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % order;
        idx /= order;
    }
}

/// (db)(g,h,k) = b(g,h)·b(gh,k)·b(g,hk)⁻¹·b(h,k)⁻¹.
pub fn coboundary(group: &FiniteGroup, b: &Cochain) -> Result<Cochain> {
    if b.degree() != 2 {
        return Err(invalid(format!("coboundary expects a 2-cochain, got degree {}", b.degree())));
    }
    if b.group_order() != group.order() {
        return Err(invalid("cochain belongs to a different group"));
    }
    Cochain::from_fn(group, 3, |a| {
        let (g, h, k) = (a[0], a[1], a[2]);
        b.get(&[g, h]) * b.get(&[group.mul(g, h), k]) / b.get(&[g, group.mul(h, k)]) / b.get(&[h, k])
    })
}

/// The 3-cocycle condition ω(h,k,l)·ω(g,hk,l)·ω(g,h,k) = ω(gh,k,l)·ω(g,h,kl).
///
/// Cochains of the wrong degree are not cocycles.
pub fn is_cocycle(group: &FiniteGroup, c: &Cochain) -> bool {
    first_cocycle_violation(group, c).is_none() && c.degree() == 3
}

/// The first quadruple where the cocycle condition fails, if any.
pub fn first_cocycle_violation(group: &FiniteGroup, c: &Cochain) -> Option<[usize; 4]> {
    if c.degree() != 3 || c.group_order() != group.order() {
        return Some([0; 4]);
    }
    for g in group.elements() {
        for h in group.elements() {
            for k in group.elements() {
                for l in group.elements() {
                    let lhs = c.get(&[h, k, l])
                        * c.get(&[g, group.mul(h, k), l])
                        * c.get(&[g, h, k]);
                    let rhs = c.get(&[group.mul(g, h), k, l]) * c.get(&[g, h, group.mul(k, l)]);
                    if lhs != rhs {
                        return Some([g, h, k, l]);
                    }
                }
            }
        }
    }
    None
}

/// ω_k(a,b,c) = exp(2πi · k·a·⌊(b+c)/n⌋ / n) on Z_n.
pub fn standard_cyclic_3cocycle(n: usize, k: i64) -> Result<Cochain> {
    let group = FiniteGroup::cyclic(n)?;
    let n64 = n as i64;
    Cochain::from_fn(&group, 3, |a| {
        let carry = ((a[1] + a[2]) / n) as i64;
        Phase::new(k.rem_euclid(n64) * a[0] as i64 * carry, n64)
    })
}

/// Searches for a normalized 2-cochain b with db = c1·c2⁻¹.
///
/// Witness angles are restricted to (1/L)Z with L = |G|²·lcm(denominators of c1/c2);
/// `None` means no witness exists within that lattice.
pub fn cohomologous(group: &FiniteGroup, c1: &Cochain, c2: &Cochain) -> Result<Option<Cochain>> {
    for (name, c) in [("first", c1), ("second", c2)] {
        if !is_cocycle(group, c) {
            return Err(invalid(format!("{name} argument is not a 3-cocycle")));
        }
    }
    let ratio = c1.div(c2)?;
    let n = group.order();
    let modulus = ratio.denominator_lcm() * (n * n) as i64;

    // unknowns: b(g,h) for g,h ≠ e
    let var = |g: usize, h: usize| -> Option<usize> {
        (g != 0 && h != 0).then(|| (g - 1) * (n - 1) + (h - 1))
    };
    let nvars = (n - 1) * (n - 1);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for g in 1..n {
        for h in 1..n {
            for k in 1..n {
                let mut row = vec![0i64; nvars];
                let mut add = |v: Option<usize>, s: i64| {
                    if let Some(v) = v {
                        row[v] += s;
                    }
                };
                add(var(g, h), 1);
                add(var(group.mul(g, h), k), 1);
                add(var(g, group.mul(h, k)), -1);
                add(var(h, k), -1);
                let target = ratio.get(&[g, h, k]).angle() * Rational64::from_integer(modulus);
                debug_assert!(target.is_integer());
                rows.push(row);
                rhs.push(target.to_integer());
            }
        }
    }
    let Some(solution) = solve_mod(rows, rhs, nvars, modulus) else {
        return Ok(None);
    };
    let b = Cochain::from_fn(group, 2, |a| match var(a[0], a[1]) {
        Some(v) => Phase::new(solution[v], modulus),
        None => Phase::one(),
    })?;
    debug_assert_eq!(coboundary(group, &b)?, ratio);
    Ok(Some(b))
}

// gcd with Bézout coefficients; (p, 1, 0) whenever p | q so that an already
// dividing pivot never changes
fn bezout(p: i64, q: i64) -> (i64, i64, i64) {
    if q % p == 0 {
        return (p, 1, 0);
    }
    let e = p.extended_gcd(&q);
    (e.gcd, e.x, e.y)
}

fn mulmod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

/// Solves A·x ≡ c (mod m) by diagonalizing A with unimodular row and column
/// operations over Z/mZ.
fn solve_mod(mut a: Vec<Vec<i64>>, mut c: Vec<i64>, ncols: usize, m: i64) -> Option<Vec<i64>> {
    let nrows = a.len();
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(m);
        }
    }
    for x in c.iter_mut() {
        *x = x.rem_euclid(m);
    }
    // column transform, x = V·y
    let mut v: Vec<Vec<i64>> =
        (0..ncols).map(|i| (0..ncols).map(|j| i64::from(i == j)).collect()).collect();

    let mut rank = 0;
    while rank < nrows.min(ncols) {
        let t = rank;
        let pivot = (t..nrows).flat_map(|i| (t..ncols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] != 0);
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        c.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..nrows {
                if a[i][t] == 0 {
                    continue;
                }
                changed = true;
                let (p, q) = (a[t][t], a[i][t]);
                let (g, s, r) = bezout(p, q);
                let (pg, qg) = (p / g, q / g);
                for j in 0..ncols {
                    let (x, y) = (a[t][j], a[i][j]);
                    a[t][j] = (mulmod(s, x, m) + mulmod(r, y, m)).rem_euclid(m);
                    a[i][j] = (mulmod(-qg, x, m) + mulmod(pg, y, m)).rem_euclid(m);
                }
                let (x, y) = (c[t], c[i]);
                c[t] = (mulmod(s, x, m) + mulmod(r, y, m)).rem_euclid(m);
                c[i] = (mulmod(-qg, x, m) + mulmod(pg, y, m)).rem_euclid(m);
            }
            for j in t + 1..ncols {
                if a[t][j] == 0 {
                    continue;
                }
                changed = true;
                let (p, q) = (a[t][t], a[t][j]);
                let (g, s, r) = bezout(p, q);
                let (pg, qg) = (p / g, q / g);
                let colop = |mat: &mut Vec<Vec<i64>>| {
                    for row in mat.iter_mut() {
                        let (x, y) = (row[t], row[j]);
                        row[t] = (mulmod(s, x, m) + mulmod(r, y, m)).rem_euclid(m);
                        row[j] = (mulmod(-qg, x, m) + mulmod(pg, y, m)).rem_euclid(m);
                    }
                };
                colop(&mut a);
                colop(&mut v);
            }
            if !changed {
                break;
            }
        }
        rank += 1;
    }

    let mut y = vec![0i64; ncols];
    for t in 0..rank {
        let d = a[t][t];
        let g = d.gcd(&m);
        if c[t] % g != 0 {
            return None;
        }
        let m_g = m / g;
        let inv = (d / g).extended_gcd(&m_g).x.rem_euclid(m_g.max(1));
        y[t] = mulmod(c[t] / g, inv, m_g.max(1));
    }
    if c[rank..].iter().any(|&x| x != 0) {
        return None;
    }
    let x = (0..ncols)
        .map(|i| (0..ncols).fold(0i64, |acc, j| (acc + mulmod(v[i][j], y[j], m)).rem_euclid(m)))
        .collect();
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cyclic_tables() {
        assert_eq!(FiniteGroup::cyclic(1).unwrap().table(), &[vec![0]]);
        assert_eq!(FiniteGroup::cyclic(2).unwrap().table(), &[vec![0, 1], vec![1, 0]]);
        assert!(FiniteGroup::cyclic(0).is_err());
        let z4 = FiniteGroup::cyclic(4).unwrap();
        // brute-force inverse search
        let inv3 = (0..4).find(|&h| z4.mul(3, h) == 0).unwrap();
        assert_eq!(inv3, 1);
        assert_eq!(z4.inv(3), 1);
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn klein_four_product() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let k = z2.direct_product(&z2);
        assert_eq!(k.order(), 4);
        assert!(k.elements().all(|g| k.mul(g, g) == 0));
    }

    #[test]
    fn phase_arithmetic() {
        let half = Phase::new(1, 2);
        assert!((half * half).is_one());
        assert_eq!(Phase::new(-1, 3), Phase::new(2, 3));
        assert_eq!(Phase::new(3, 4).inv(), Phase::new(1, 4));
        assert_eq!("5/4".parse::<Phase>().unwrap(), Phase::new(1, 4));
        assert_eq!(Phase::snap(Phase::new(1, 3).to_complex(), 6, 1e-8), Some(Phase::new(1, 3)));
        assert_eq!(Phase::snap(num_complex::Complex64::new(0.9, 0.0), 6, 1e-8), None);
    }

    #[test]
    fn coboundary_of_trivial_is_trivial() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let b = Cochain::trivial(&g, 2).unwrap();
        assert!(coboundary(&g, &b).unwrap().is_trivial());
        assert!(coboundary(&g, &Cochain::trivial(&g, 3).unwrap()).is_err());
    }

    #[test]
    fn coboundary_z2_pointwise() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let b = Cochain::from_entries(&g, 2, &[(vec![1, 1], Phase::new(1, 2))]).unwrap();
        let db = coboundary(&g, &b).unwrap();
        // brute-force the defining formula over all 8 triples
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let expect = b.get(&[x, y]) * b.get(&[(x + y) % 2, z])
                        / b.get(&[x, (y + z) % 2])
                        / b.get(&[y, z]);
                    assert_eq!(db.get(&[x, y, z]), expect);
                }
            }
        }
        assert!(db.get(&[1, 1, 1]).is_one());
        assert!(is_cocycle(&g, &db));
    }

    #[test]
    fn standard_cocycle_values() {
        let w = standard_cyclic_3cocycle(2, 1).unwrap();
        let g = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(w.get(&[1, 1, 1]), Phase::new(1, 2));
        let nontrivial = w.values().iter().filter(|p| !p.is_one()).count();
        assert_eq!(nontrivial, 1);
        assert!(is_cocycle(&g, &w));
        assert!(standard_cyclic_3cocycle(5, 0).unwrap().is_trivial());
        assert_eq!(standard_cyclic_3cocycle(3, 1).unwrap().get(&[1, 2, 2]), Phase::new(1, 3));
    }

    #[test]
    fn non_normalized_rejected() {
        let g = FiniteGroup::cyclic(2).unwrap();
        assert!(Cochain::from_entries(&g, 2, &[(vec![0, 1], Phase::new(1, 2))]).is_err());
    }

    #[test]
    fn nontrivial_class_on_z2() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let w = standard_cyclic_3cocycle(2, 1).unwrap();
        let triv = Cochain::trivial(&g, 3).unwrap();
        assert_eq!(cohomologous(&g, &w, &triv).unwrap(), None);
        // exhaustive oracle: no 2-cochain with denominators dividing 4 has db = w
        for p in 0..4 {
            let b = Cochain::from_entries(&g, 2, &[(vec![1, 1], Phase::new(p, 4))]).unwrap();
            assert_ne!(coboundary(&g, &b).unwrap(), w);
        }
    }

    #[test]
    fn cohomologous_finds_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        for g in [FiniteGroup::cyclic(3).unwrap(), FiniteGroup::cyclic(4).unwrap(), z2.direct_product(&z2)] {
            for _ in 0..5 {
                let b0 = Cochain::random(&g, 2, 12, &mut rng).unwrap();
                let db0 = coboundary(&g, &b0).unwrap();
                let triv = Cochain::trivial(&g, 3).unwrap();
                let b = cohomologous(&g, &db0, &triv).unwrap().expect("witness exists");
                assert_eq!(coboundary(&g, &b).unwrap(), db0);
            }
        }
    }

    #[test]
    fn cohomologous_reflexive() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let w = standard_cyclic_3cocycle(3, 2).unwrap();
        let b = cohomologous(&g, &w, &w).unwrap().unwrap();
        assert!(coboundary(&g, &b).unwrap().is_trivial());
        let bad = Cochain::from_entries(&g, 3, &[(vec![1, 1, 1], Phase::new(1, 3))]).unwrap();
        assert!(cohomologous(&g, &bad, &w).is_err());
    }

    #[test]
    fn table_text_round_trip() {
        let g = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(FiniteGroup::from_table_text(&g.to_table_text()).unwrap(), g);
        let w = standard_cyclic_3cocycle(3, 1).unwrap();
        let text = w.to_table_text();
        assert!(text.starts_with("0,0,0 = 0/1\n"));
        assert_eq!(Cochain::from_table_text(&g, 3, &text).unwrap(), w);
    }
}
