//! Symbolic Cuntz algebra O_n.
//!
//! Elements are finite sums of normal-form words `v_μ [m] v_ν*`, where `m` is an
//! optional opaque symbol treated as central inside its word. Equality expands
//! every word to a common annihilation length `L` using
//! `v_μ v_ν* = Σ_i v_{μi} v_{νi}*`; at fixed `|ν| = L` the words are linearly
//! independent, so the coefficient maps are compared directly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};

/// Default cap on the expansion level used by [`CuntzElement::equals`].
pub const DEFAULT_LEVEL_CAP: usize = 8;

/// Exact complex coefficients with rational parts.
pub type QComplex = Complex<Rational64>;

pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;
    /// Equality used by the decision procedure.
    fn same(&self, other: &Self) -> bool;
}

impl Coeff for QComplex {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn same(&self, other: &Self) -> bool {
        self == other
    }
}

impl Coeff for Complex64 {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn same(&self, other: &Self) -> bool {
        (self - other).norm() <= 1e-12
    }
}

pub fn q(re: i64, im: i64) -> QComplex {
    Complex::new(Rational64::from_integer(re), Rational64::from_integer(im))
}

/// An opaque element `m` (or `m*`) placed between the creation and
/// annihilation parts of a word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormalSym {
    pub name: String,
    pub adjoint: bool,
}

impl FormalSym {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), adjoint: false }
    }

    pub fn star(&self) -> Self {
        Self { name: self.name.clone(), adjoint: !self.adjoint }
    }
}

/// `v_μ [m] v_ν*` with letters in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuntzWord {
    pub mu: Vec<u32>,
    pub nu: Vec<u32>,
    pub formal: Option<FormalSym>,
}

impl CuntzWord {
    pub fn one() -> Self {
        Self { mu: vec![], nu: vec![], formal: None }
    }

    pub fn new(mu: Vec<u32>, nu: Vec<u32>) -> Self {
        Self { mu, nu, formal: None }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
            formal: self.formal.as_ref().map(FormalSym::star),
        }
    }

    /// Product of two normal-form words; `None` when it vanishes.
    pub fn multiply(&self, other: &CuntzWord) -> Result<Option<CuntzWord>> {
        let formal = match (&self.formal, &other.formal) {
            (Some(a), Some(b)) => {
                return Err(Error::Unsupported(format!(
                    "two formal symbols ({} and {}) in one word",
                    a.name, b.name
                )))
            }
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let (l, r) = (&self.nu, &other.mu);
        let k = l.len().min(r.len());
        if l[..k] != r[..k] {
            return Ok(None);
        }
        let (mut mu, mut nu) = (self.mu.clone(), other.nu.clone());
        if r.len() >= l.len() {
            // v_ν* v_{νρ} = v_ρ
            mu.extend_from_slice(&r[k..]);
        } else {
            // v_{μρ}* v_μ = v_ρ*, and v_ρ* v_ν* = (v_ν v_ρ)*
            nu.extend_from_slice(&l[k..]);
        }
        Ok(Some(CuntzWord { mu, nu, formal }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuntzElement<C: Coeff = QComplex> {
    n: u32,
    terms: BTreeMap<CuntzWord, C>,
}

pub type Cuntz = CuntzElement<QComplex>;

impl<C: Coeff> CuntzElement<C> {
    pub fn zero(n: u32) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: u32) -> Self {
        Self::from_word(n, CuntzWord::one(), C::one())
    }

    pub fn from_word(n: u32, word: CuntzWord, c: C) -> Self {
        let mut out = Self::zero(n);
        out.add_term(word, c);
        out
    }

    /// The generator `v_i` (1-based).
    pub fn generator(n: u32, i: u32) -> Self {
        Self::from_word(n, CuntzWord::new(vec![i], vec![]), C::one())
    }

    pub fn formal(n: u32, sym: FormalSym) -> Self {
        Self::from_word(n, CuntzWord { mu: vec![], nu: vec![], formal: Some(sym) }, C::one())
    }

    /// Builds an element after checking that every letter lies in `1..=n`.
    pub fn from_terms(n: u32, terms: Vec<(CuntzWord, C)>) -> Result<Self> {
        let mut out = Self::zero(n);
        for (w, c) in terms {
            if let Some(bad) = w.mu.iter().chain(&w.nu).find(|&&i| i == 0 || i > n) {
                return Err(invalid(format!("letter {bad} outside 1..={n}")));
            }
            out.add_term(w, c);
        }
        Ok(out)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<CuntzWord, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_formal(&self) -> bool {
        self.terms.keys().any(|w| w.formal.is_some())
    }

    /// Largest annihilation length among the terms.
    pub fn level(&self) -> usize {
        self.terms.keys().map(|w| w.nu.len()).max().unwrap_or(0)
    }

    fn add_term(&mut self, word: CuntzWord, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(word.clone()).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(invalid(format!("elements of O_{} and O_{} cannot be combined", self.n, other.n)))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n);
        for (w, d) in &self.terms {
            out.add_term(w.clone(), d.clone() * c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = Self::zero(self.n);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if let Some(w) = w1.multiply(w2)? {
                    out.add_term(w, c1.clone() * c2.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }

    /// Rewrites every word to annihilation length exactly `level`.
    pub fn expand_to(&self, level: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            let mut frontier = vec![w.clone()];
            for _ in w.nu.len()..level {
                frontier = frontier
                    .into_iter()
                    .flat_map(|w| {
                        (1..=self.n).map(move |i| {
                            let mut x = w.clone();
                            x.mu.push(i);
                            x.nu.push(i);
                            x
                        })
                    })
                    .collect();
            }
            for x in frontier {
                out.add_term(x, c.clone());
            }
        }
        out
    }

    /// Compares after expanding both sides to `level`, which must be at least
    /// the level of either element.
    pub fn equals_at_level(&self, other: &Self, level: usize) -> Result<bool> {
        self.check_n(other)?;
        if level < self.level().max(other.level()) {
            return Err(invalid("expansion level below the elements' own level"));
        }
        let a = self.expand_to(level);
        let b = other.expand_to(level);
        Ok(a.terms.len() == b.terms.len()
            && a.terms.iter().all(|(w, c)| b.terms.get(w).is_some_and(|d| c.same(d))))
    }

    pub fn equals_capped(&self, other: &Self, cap: usize) -> Result<bool> {
        let level = self.level().max(other.level());
        if level > cap {
            return Err(Error::UndecidedAtLevel { level, cap });
        }
        self.equals_at_level(other, level)
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.equals_capped(other, DEFAULT_LEVEL_CAP)
    }
}

impl Cuntz {
    pub fn to_float(&self) -> CuntzElement<Complex64> {
        let mut out = CuntzElement::zero(self.n);
        for (w, c) in &self.terms {
            let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
            out.add_term(w.clone(), Complex64::new(f(c.re), f(c.im)));
        }
        out
    }
}

/// Outcome of checking that a row `(w_1, …, w_n)` is unitary.
#[derive(Debug, Clone, PartialEq)]
pub enum RowVerdict {
    Pass,
    /// `(U*U)_{ij} ≠ δ_ij` at the 1-based entry `(i, j)`.
    EntryFails { i: usize, j: usize },
    /// `UU* = Σ w_i w_i* ≠ 1`.
    SumFails,
}

impl RowVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, RowVerdict::Pass)
    }
}

/// Checks `w_i* w_j = δ_ij` and `Σ w_i w_i* = 1` for a row over O_n.
pub fn row_unitary_check_of<C: Coeff>(n: u32, row: &[CuntzElement<C>]) -> Result<RowVerdict> {
    let one = CuntzElement::<C>::one(n);
    let zero = CuntzElement::<C>::zero(n);
    for (i, a) in row.iter().enumerate() {
        for (j, b) in row.iter().enumerate() {
            let entry = a.adjoint().multiply(b)?;
            let expected = if i == j { &one } else { &zero };
            if !entry.equals(expected)? {
                return Ok(RowVerdict::EntryFails { i: i + 1, j: j + 1 });
            }
        }
    }
    let mut sum = CuntzElement::<C>::zero(n);
    for a in row {
        sum = sum.add(&a.multiply(&a.adjoint())?)?;
    }
    Ok(if sum.equals(&one)? { RowVerdict::Pass } else { RowVerdict::SumFails })
}

/// The canonical row `(v_1, …, v_n)`.
pub fn row_unitary_check(n: u32) -> Result<RowVerdict> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let row: Vec<Cuntz> = (1..=n).map(|i| Cuntz::generator(n, i)).collect();
    row_unitary_check_of(n, &row)
}

/// Σ_{i,j} T_{ij} v_i m v_j*, the image of `m ⊗ T` under conjugation by the
/// row `(v_1, …, v_n)`. `sym = None` stands for `m = 1`.
pub fn conjugate_amplified<C: Coeff>(
    n: u32,
    sym: Option<&FormalSym>,
    t: &[Vec<C>],
) -> Result<CuntzElement<C>> {
    let nn = n as usize;
    if t.len() != nn || t.iter().any(|r| r.len() != nn) {
        return Err(invalid(format!("T must be {n}x{n}")));
    }
    let mut out = CuntzElement::zero(n);
    for (i, row) in t.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            let w = CuntzWord { mu: vec![i as u32 + 1], nu: vec![j as u32 + 1], formal: sym.cloned() };
            out.add_term(w, c.clone());
        }
    }
    Ok(out)
}

/// A unital endomorphism of O_n determined by the images of the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct CuntzEndo<C: Coeff = QComplex> {
    n: u32,
    images: Vec<CuntzElement<C>>,
}

impl<C: Coeff> CuntzEndo<C> {
    /// Validates the Cuntz relations for the images.
    pub fn new(n: u32, images: Vec<CuntzElement<C>>) -> Result<Self> {
        if images.len() != n as usize {
            return Err(Error::InvalidEndomorphism(format!(
                "{} images given for {n} generators",
                images.len()
            )));
        }
        if images.iter().any(|x| x.n != n || x.has_formal()) {
            return Err(Error::InvalidEndomorphism("images must be formal-free elements of O_n".into()));
        }
        match row_unitary_check_of(n, &images)? {
            RowVerdict::Pass => Ok(Self { n, images }),
            RowVerdict::EntryFails { i, j } => Err(Error::InvalidEndomorphism(format!(
                "images violate w_{i}* w_{j} = δ"
            ))),
            RowVerdict::SumFails => {
                Err(Error::InvalidEndomorphism("images violate Σ w_i w_i* = 1".into()))
            }
        }
    }

    pub fn identity(n: u32) -> Self {
        Self { n, images: (1..=n).map(|i| CuntzElement::generator(n, i)).collect() }
    }

    /// λ_u(v_i) = u·v_i.
    pub fn lambda(u: &CuntzElement<C>) -> Result<Self> {
        let n = u.n;
        let images = (1..=n)
            .map(|i| u.multiply(&CuntzElement::generator(n, i)))
            .collect::<Result<_>>()?;
        Self::new(n, images)
    }

    pub fn images(&self) -> &[CuntzElement<C>] {
        &self.images
    }

    fn word_image(&self, letters: &[u32]) -> Result<CuntzElement<C>> {
        let mut out = CuntzElement::one(self.n);
        for &i in letters {
            out = out.multiply(&self.images[i as usize - 1])?;
        }
        Ok(out)
    }

    pub fn apply(&self, x: &CuntzElement<C>) -> Result<CuntzElement<C>> {
        if x.n != self.n {
            return Err(invalid("element and endomorphism live on different O_n"));
        }
        let mut out = CuntzElement::zero(self.n);
        for (w, c) in &x.terms {
            if w.formal.is_some() {
                return Err(Error::Unsupported("endomorphisms act on formal-free elements only".into()));
            }
            let img = self.word_image(&w.mu)?.multiply(&self.word_image(&w.nu)?.adjoint())?;
            out = out.add(&img.scale(c))?;
        }
        Ok(out)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &CuntzEndo<C>) -> Result<Self> {
        let images = first.images.iter().map(|x| self.apply(x)).collect::<Result<_>>()?;
        Ok(Self { n: self.n, images })
    }
}

/// A rectangular matrix with entries in O_n.
#[derive(Debug, Clone, PartialEq)]
pub struct CuntzMatrix<C: Coeff = QComplex> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<CuntzElement<C>>,
}

impl<C: Coeff> CuntzMatrix<C> {
    pub fn new(rows: usize, cols: usize, entries: Vec<CuntzElement<C>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(invalid(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn get(&self, i: usize, j: usize) -> &CuntzElement<C> {
        &self.entries[i * self.cols + j]
    }

    fn n(&self) -> Result<u32> {
        self.entries.first().map(|e| e.n).ok_or_else(|| invalid("empty matrix"))
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(invalid("matrix shapes do not compose"));
        }
        let n = self.n()?;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = CuntzElement::zero(n);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).multiply(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Self::new(self.rows, other.cols, entries)
    }

    pub fn adjoint(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).adjoint());
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.rows != other.rows || self.cols != other.cols {
            return Ok(false);
        }
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.equals(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Identity matrix of size k over O_n.
    pub fn identity(n: u32, k: usize) -> Self {
        let entries = (0..k * k)
            .map(|i| if i / k == i % k { CuntzElement::one(n) } else { CuntzElement::zero(n) })
            .collect();
        Self { rows: k, cols: k, entries }
    }
}

/// ^ρ acting entrywise on a matrix over O_n.
pub fn amp_endofunctor<C: Coeff>(rho: &CuntzEndo<C>, a: &CuntzMatrix<C>) -> Result<CuntzMatrix<C>> {
    let entries = a.entries.iter().map(|x| rho.apply(x)).collect::<Result<_>>()?;
    CuntzMatrix::new(a.rows, a.cols, entries)
}

// ---------------------------------------------------------------------------
// text syntax

fn fmt_rational(r: &Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_coeff(c: &QComplex) -> String {
    let (re, im) = (&c.re, &c.im);
    if im.is_zero() {
        fmt_rational(re)
    } else if re.is_zero() {
        format!("{}i", fmt_rational(im))
    } else if *im < Rational64::zero() {
        format!("{}-{}i", fmt_rational(re), fmt_rational(&-im))
    } else {
        format!("{}+{}i", fmt_rational(re), fmt_rational(im))
    }
}

fn fmt_letters(n: u32, letters: &[u32]) -> String {
    if n <= 9 {
        letters.iter().map(|i| i.to_string()).collect()
    } else {
        let inner: Vec<String> = letters.iter().map(|i| i.to_string()).collect();
        format!("[{}]", inner.join(","))
    }
}

fn fmt_word(n: u32, w: &CuntzWord) -> String {
    let mut parts = Vec::new();
    if !w.mu.is_empty() {
        parts.push(format!("v{}", fmt_letters(n, &w.mu)));
    }
    if let Some(f) = &w.formal {
        parts.push(if f.adjoint { format!("{}*", f.name) } else { f.name.clone() });
    }
    if !w.nu.is_empty() {
        parts.push(format!("v{}*", fmt_letters(n, &w.nu)));
    }
    parts.join(" ")
}

impl fmt::Display for Cuntz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let word = fmt_word(self.n, w);
            match (c.is_one(), word.is_empty()) {
                (true, true) => f.write_str("1")?,
                (true, false) => f.write_str(&word)?,
                (false, true) => write!(f, "({})", fmt_coeff(c))?,
                (false, false) => write!(f, "({}) {}", fmt_coeff(c), word)?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: u32,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: 1, column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected an integer"))
    }

    /// `p`, `p/q`, optionally followed by `i`; a bare `i` means 1·i.
    fn real_or_imag(&mut self) -> Result<QComplex> {
        self.skip_ws();
        let r = if self.src.get(self.pos) == Some(&b'i') {
            Rational64::one()
        } else {
            let p = self.int()?;
            if self.src.get(self.pos) == Some(&b'/') {
                self.pos += 1;
                let q = self.int()?;
                if q == 0 {
                    return Err(self.err("zero denominator"));
                }
                Rational64::new(p, q)
            } else {
                Rational64::from_integer(p)
            }
        };
        if self.src.get(self.pos) == Some(&b'i') {
            self.pos += 1;
            Ok(Complex::new(Rational64::zero(), r))
        } else {
            Ok(Complex::new(r, Rational64::zero()))
        }
    }

    fn coeff(&mut self) -> Result<QComplex> {
        let mut total = QComplex::zero();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        self.eat(b'+');
        loop {
            let part = self.real_or_imag()?;
            total += part * q(sign, 0);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(b')') => {
                    self.pos += 1;
                    return Ok(total);
                }
                _ => return Err(self.err("expected ')' after coefficient")),
            }
        }
    }

    fn letters(&mut self) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        if self.src.get(self.pos) == Some(&b'[') {
            self.pos += 1;
            loop {
                self.skip_ws();
                out.push(self.int()? as u32);
                if self.eat(b',') {
                    continue;
                }
                if self.eat(b']') {
                    break;
                }
                return Err(self.err("expected ',' or ']'"));
            }
        } else {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                out.push(u32::from(self.src[self.pos] - b'0'));
                self.pos += 1;
            }
            if self.n > 9 && out.len() > 1 {
                return Err(self.err("use bracketed indices for n > 9"));
            }
        }
        if out.is_empty() {
            return Err(self.err("expected generator indices"));
        }
        if let Some(bad) = out.iter().find(|&&i| i == 0 || i > self.n) {
            return Err(self.err(format!("generator index {bad} outside 1..={}", self.n)));
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Option<Cuntz>> {
        let Some(c) = self.peek() else { return Ok(None) };
        let n = self.n;
        let out = match c {
            b'(' => {
                self.pos += 1;
                Cuntz::one(n).scale(&self.coeff()?)
            }
            b'0' | b'1' => {
                self.pos += 1;
                if c == b'0' { Cuntz::zero(n) } else { Cuntz::one(n) }
            }
            b'v' if self.src.get(self.pos + 1).is_some_and(|b| b.is_ascii_digit() || *b == b'[') => {
                self.pos += 1;
                let letters = self.letters()?;
                Cuntz::from_word(n, CuntzWord::new(letters, vec![]), QComplex::one())
            }
            c if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Cuntz::formal(n, FormalSym::new(name))
            }
            _ => return Ok(None),
        };
        if self.src.get(self.pos) == Some(&b'*') {
            self.pos += 1;
            return Ok(Some(out.adjoint()));
        }
        Ok(Some(out))
    }

    fn term(&mut self) -> Result<Cuntz> {
        let mut acc: Option<Cuntz> = None;
        while let Some(f) = self.factor()? {
            acc = Some(match acc {
                None => f,
                Some(a) => a.multiply(&f)?,
            });
        }
        acc.ok_or_else(|| self.err("expected a term"))
    }

    fn expr(&mut self) -> Result<Cuntz> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = acc.scale(&q(-1, 0));
        }
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else if self.peek().is_none() {
                return Ok(acc);
            } else {
                return Err(self.err("unexpected character"));
            }
        }
    }
}

/// Parses the text syntax, e.g. `v1 v2* + (1/2) v12 v21*`.
pub fn parse(n: u32, text: &str) -> Result<Cuntz> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    Parser { src: text.as_bytes(), pos: 0, n }.expr()
}
