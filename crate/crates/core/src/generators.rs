//! Morphic and automatic constructions of the binary rich word `r`.
//!
//! `r` is produced three ways: as `tau(phi^omega(0))`, as `g(f^omega(0))`
//! with the erasing coding `g`, and by a DFAO reading canonical Pell
//! representations most-significant-digit first.

use std::fmt;

use thiserror::Error;

use crate::numeration::PellRep;
use crate::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("symbol {symbol} is not in the domain of morphism {morphism}")]
    UnknownSymbol { morphism: String, symbol: u8 },
    #[error("image of {symbol} under {morphism} contains {bad}, outside the target alphabet")]
    ImageOutOfAlphabet { morphism: String, symbol: u8, bad: u8 },
    #[error("morphism {morphism} is not prolongable on {seed}")]
    NotProlongable { morphism: String, seed: u8 },
    #[error("fixed point of {morphism} from {seed} is finite (length {len})")]
    FiniteFixedPoint { morphism: String, seed: u8, len: usize },
    #[error("DFAO has no transition from state {state} on digit {digit}")]
    UndefinedTransition { state: u8, digit: u8 },
    #[error("DFAO state {state} has no output")]
    UndefinedOutput { state: u8 },
    #[error("length sequence mismatch at index {index}: recurrence gives {recurrence}, expansion gives {expanded}")]
    LengthMismatch { index: usize, recurrence: u64, expanded: u64 },
}

/// A morphism from `{0..domain_size}` to words over `{0..target_size}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    name: String,
    target_size: u8,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(name: &str, target_size: u8, images: Vec<Word>) -> Result<Self, GeneratorError> {
        for (symbol, image) in images.iter().enumerate() {
            if let Some(&bad) = image.iter().find(|&&b| b >= target_size) {
                return Err(GeneratorError::ImageOutOfAlphabet {
                    morphism: name.to_string(),
                    symbol: symbol as u8,
                    bad,
                });
            }
        }
        Ok(Morphism { name: name.to_string(), target_size, images })
    }

    fn from_table(name: &str, target_size: u8, table: &[&str]) -> Self {
        let images = table.iter().map(|s| crate::parse_symbols(s).expect("static table")).collect();
        Morphism::new(name, target_size, images).expect("static table")
    }

    /// `phi: 0 -> 01, 1 -> 02, 2 -> 022`.
    pub fn phi() -> Self {
        Self::from_table("phi", 3, &["01", "02", "022"])
    }

    /// `tau: 0 -> 0, 1 -> 01, 2 -> 011`.
    pub fn tau() -> Self {
        Self::from_table("tau", 2, &["0", "01", "011"])
    }

    /// `f: 0 -> 012, 1 -> 304, 2 -> 0, 3 -> 354, 4 -> 3, 5 -> 032`.
    pub fn f() -> Self {
        Self::from_table("f", 6, &["012", "304", "0", "354", "3", "032"])
    }

    /// `g: 0 -> 0, 1 -> 0, 2 -> e, 3 -> 1, 4 -> e, 5 -> 1`.
    pub fn g() -> Self {
        Self::from_table("g", 2, &["0", "0", "", "1", "", "1"])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn target_size(&self) -> u8 {
        self.target_size
    }

    pub fn image(&self, symbol: u8) -> Result<&[u8], GeneratorError> {
        self.images
            .get(symbol as usize)
            .map(Vec::as_slice)
            .ok_or_else(|| GeneratorError::UnknownSymbol { morphism: self.name.clone(), symbol })
    }

    /// Replaces the image of one symbol; used to build corrupted controls.
    pub fn with_image(mut self, symbol: u8, image: Word) -> Result<Self, GeneratorError> {
        if symbol as usize >= self.images.len() {
            return Err(GeneratorError::UnknownSymbol { morphism: self.name, symbol });
        }
        self.images[symbol as usize] = image;
        Morphism::new(&self.name, self.target_size, self.images)
    }

    pub fn is_prolongable_on(&self, seed: u8) -> bool {
        self.images
            .get(seed as usize)
            .is_some_and(|img| img.len() >= 2 && img[0] == seed)
    }

    pub fn apply(&self, word: &[u8]) -> Result<Word, GeneratorError> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &s in word {
            out.extend_from_slice(self.image(s)?);
        }
        Ok(out)
    }

    /// `self^n(word)`.
    pub fn iterate(&self, word: &[u8], n: usize) -> Result<Word, GeneratorError> {
        let mut w = word.to_vec();
        for _ in 0..n {
            w = self.apply(&w)?;
        }
        Ok(w)
    }

    /// First `len` symbols of the fixed point starting with `seed`.
    pub fn fixed_point_prefix(&self, seed: u8, len: usize) -> Result<Word, GeneratorError> {
        if !self.is_prolongable_on(seed) {
            return Err(GeneratorError::NotProlongable { morphism: self.name.clone(), seed });
        }
        // x = h(x) = h(x_0) h(x_1) ..., and x_0 = seed.
        let mut buf = self.image(seed)?.to_vec();
        let mut next = 1;
        while buf.len() < len {
            if next >= buf.len() {
                return Err(GeneratorError::FiniteFixedPoint {
                    morphism: self.name.clone(),
                    seed,
                    len: buf.len(),
                });
            }
            let s = buf[next];
            let image = self.image(s)?;
            buf.extend_from_slice(image);
            next += 1;
        }
        buf.truncate(len);
        Ok(buf)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.name)?;
        for (s, img) in self.images.iter().enumerate() {
            let img = if img.is_empty() { "e".to_string() } else { crate::render_symbols(img) };
            write!(f, " {s}->{img}")?;
        }
        Ok(())
    }
}

/// Deterministic finite automaton with output over Pell digits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    start: u8,
    transitions: Vec<[Option<u8>; 3]>,
    outputs: Vec<Option<u8>>,
}

impl Dfao {
    /// State `q` on digit `d` moves to the `d`-th symbol of `f(q)`; the
    /// output of `q` is `g(q)` when that image is a single symbol.
    pub fn from_morphic(f: &Morphism, g: &Morphism) -> Result<Self, GeneratorError> {
        let mut transitions = Vec::with_capacity(f.domain_size());
        let mut outputs = Vec::with_capacity(f.domain_size());
        for q in 0..f.domain_size() as u8 {
            let image = f.image(q)?;
            let mut row = [None; 3];
            for (d, slot) in row.iter_mut().enumerate() {
                *slot = image.get(d).copied();
            }
            transitions.push(row);
            let out = g.image(q)?;
            outputs.push(if out.len() == 1 { Some(out[0]) } else { None });
        }
        Ok(Dfao { start: 0, transitions, outputs })
    }

    /// The automaton producing `r`.
    pub fn for_r() -> Self {
        Dfao::from_morphic(&Morphism::f(), &Morphism::g()).expect("static tables")
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn run_msd<I: IntoIterator<Item = u8>>(&self, digits: I) -> Result<u8, GeneratorError> {
        let mut state = self.start;
        for digit in digits {
            state = self
                .transitions
                .get(state as usize)
                .and_then(|row| row.get(digit as usize).copied().flatten())
                .ok_or(GeneratorError::UndefinedTransition { state, digit })?;
        }
        self.outputs
            .get(state as usize)
            .copied()
            .flatten()
            .ok_or(GeneratorError::UndefinedOutput { state })
    }

    pub fn eval(&self, n: u64) -> Result<u8, GeneratorError> {
        self.run_msd(PellRep::encode(n).digits_msd())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RMethod {
    PhiTau,
    FG,
    Dfao,
}

impl RMethod {
    pub const ALL: [RMethod; 3] = [RMethod::PhiTau, RMethod::FG, RMethod::Dfao];

    pub fn name(self) -> &'static str {
        match self {
            RMethod::PhiTau => "phi-tau",
            RMethod::FG => "f-g",
            RMethod::Dfao => "dfao",
        }
    }
}

impl std::str::FromStr for RMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "phi-tau" | "morphic-phi-tau" => Ok(RMethod::PhiTau),
            "f-g" | "morphic-f-g" => Ok(RMethod::FG),
            "dfao" => Ok(RMethod::Dfao),
            other => Err(format!("unknown method {other:?} (expected phi-tau, f-g or dfao)")),
        }
    }
}

/// `g` applied to a fixed-point prefix of `f`, trimmed to `len`; the
/// underlying prefix grows until the erasing coding yields enough symbols.
fn erasing_fixed_point_prefix(
    f: &Morphism,
    g: &Morphism,
    seed: u8,
    len: usize,
) -> Result<Word, GeneratorError> {
    let mut raw_len = 3 * len.max(1);
    loop {
        let raw = f.fixed_point_prefix(seed, raw_len)?;
        let mut out = g.apply(&raw)?;
        if out.len() >= len {
            out.truncate(len);
            return Ok(out);
        }
        raw_len *= 2;
    }
}

/// First `len` symbols of `r`.
pub fn word_r(method: RMethod, len: usize) -> Word {
    match method {
        RMethod::PhiTau => {
            let fixed = Morphism::phi().fixed_point_prefix(0, len.max(2)).expect("phi is prolongable on 0");
            let mut w = Morphism::tau().apply(&fixed).expect("tau covers phi's alphabet");
            w.truncate(len);
            w
        }
        RMethod::FG => erasing_fixed_point_prefix(&Morphism::f(), &Morphism::g(), 0, len)
            .expect("f is prolongable on 0"),
        RMethod::Dfao => {
            let dfao = Dfao::for_r();
            (0..len as u64)
                .map(|n| dfao.eval(n).expect("canonical representations are accepted"))
                .collect()
        }
    }
}

/// One instance of a named identity at a given index.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub index: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    fn record(&mut self, identity: &'static str, index: usize, holds: bool) {
        self.checks.push(IdentityCheck { identity, index, holds });
    }

    fn merge(&mut self, other: IdentityReport) {
        self.checks.extend(other.checks);
    }
}

/// `g(f^n(seed))` for `n` in `0..=max_n`.
fn coded_iterates(f: &Morphism, g: &Morphism, seed: u8, max_n: usize) -> Result<Vec<Word>, GeneratorError> {
    let mut raw = vec![seed];
    let mut out = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        if n > 0 {
            raw = f.apply(&raw)?;
        }
        out.push(g.apply(&raw)?);
    }
    Ok(out)
}

fn concat(parts: &[&[u8]]) -> Word {
    parts.concat()
}

/// Checks, for `2 <= n <= max_n`,
/// `g(f^n(0)) = g(f^{n-1}(0)) g(f^{n-2}(3)) g(f^{n-1}(0))` and
/// `g(f^n(3)) = g(f^{n-1}(3)) g(f^{n-2}(0)) g(f^{n-1}(3))`.
pub fn verify_split_identities_with(
    f: &Morphism,
    g: &Morphism,
    max_n: usize,
) -> Result<IdentityReport, GeneratorError> {
    let zero = coded_iterates(f, g, 0, max_n)?;
    let three = coded_iterates(f, g, 3, max_n)?;
    let mut report = IdentityReport::default();
    for n in 2..=max_n {
        let lhs0 = concat(&[&zero[n - 1], &three[n - 2], &zero[n - 1]]);
        report.record("g(f^n(0)) = g(f^{n-1}(0)) g(f^{n-2}(3)) g(f^{n-1}(0))", n, zero[n] == lhs0);
        let lhs3 = concat(&[&three[n - 1], &zero[n - 2], &three[n - 1]]);
        report.record("g(f^n(3)) = g(f^{n-1}(3)) g(f^{n-2}(0)) g(f^{n-1}(3))", n, three[n] == lhs3);
    }
    Ok(report)
}

pub fn verify_split_identities(max_n: usize) -> IdentityReport {
    verify_split_identities_with(&Morphism::f(), &Morphism::g(), max_n).expect("static tables")
}

/// Checks, for `1 <= k <= max_k`,
/// `tau(phi^k(0)) = g(f^k(0)) g(f^{k-1}(3))`,
/// `tau(phi^k(1)) = g(f^k(0)) g(f^k(3))` and
/// `tau(phi^k(2)) = g(f^k(0)) g(f^{k+1}(3))`.
pub fn verify_equivalence_with(
    phi: &Morphism,
    tau: &Morphism,
    f: &Morphism,
    g: &Morphism,
    max_k: usize,
) -> Result<IdentityReport, GeneratorError> {
    let zero = coded_iterates(f, g, 0, max_k)?;
    let three = coded_iterates(f, g, 3, max_k + 1)?;
    let mut report = IdentityReport::default();
    let mut phi_iter: [Word; 3] = [vec![0], vec![1], vec![2]];
    for k in 1..=max_k {
        for w in phi_iter.iter_mut() {
            *w = phi.apply(w)?;
        }
        let lhs: Vec<Word> = phi_iter.iter().map(|w| tau.apply(w)).collect::<Result<_, _>>()?;
        report.record("tau(phi^k(0)) = g(f^k(0)) g(f^{k-1}(3))", k, lhs[0] == concat(&[&zero[k], &three[k - 1]]));
        report.record("tau(phi^k(1)) = g(f^k(0)) g(f^k(3))", k, lhs[1] == concat(&[&zero[k], &three[k]]));
        report.record("tau(phi^k(2)) = g(f^k(0)) g(f^{k+1}(3))", k, lhs[2] == concat(&[&zero[k], &three[k + 1]]));
    }
    Ok(report)
}

pub fn verify_equivalence(max_k: usize) -> IdentityReport {
    verify_equivalence_with(&Morphism::phi(), &Morphism::tau(), &Morphism::f(), &Morphism::g(), max_k)
        .expect("static tables")
}

/// Split and equivalence identities together, as the `verify-morphisms` command runs them.
pub fn verify_all(max_k: usize) -> IdentityReport {
    let mut report = verify_split_identities(max_k.max(2));
    report.merge(verify_equivalence(max_k.max(1)));
    report
}

/// `L_i = |tau(phi^i(0))|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthSequence {
    pub values: Vec<u64>,
}

/// Indices up to which `length_sequence` compares against literal expansion.
pub const LENGTH_DIRECT_CHECK_BOUND: usize = 12;

pub fn length_sequence(count: usize) -> Result<LengthSequence, GeneratorError> {
    let mut values: Vec<u64> = Vec::with_capacity(count);
    for i in 0..count {
        let v = match i {
            0 => 1,
            1 => 3,
            _ => 2 * values[i - 1] + values[i - 2],
        };
        values.push(v);
    }
    let (phi, tau) = (Morphism::phi(), Morphism::tau());
    let mut raw = vec![0u8];
    for (i, &v) in values.iter().enumerate().take(LENGTH_DIRECT_CHECK_BOUND + 1) {
        if i > 0 {
            raw = phi.apply(&raw)?;
        }
        let expanded = tau.apply(&raw)?.len() as u64;
        if expanded != v {
            return Err(GeneratorError::LengthMismatch { index: i, recurrence: v, expanded });
        }
    }
    Ok(LengthSequence { values })
}
