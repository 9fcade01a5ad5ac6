use std::fmt;

use crate::error::{Error, Result};

use super::Formula;

/// Most variables a truth table will hold; the mask then has 65536 bits.
pub const MAX_VARS: usize = 16;

/// The value of a formula under every assignment of an ordered variable list.
///
/// Bit `j` of the mask is the value under assignment `j`, where variable `i`
/// is true exactly when bit `i` of `j` is set. The all-ones mask is the top
/// element of the free algebra and the all-zeros mask the bottom.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    vars: Vec<String>,
    mask: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

/// Bits of the final word that belong to the table.
fn tail_mask(n: usize) -> u64 {
    let bits = 1usize << n;
    if bits.is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl TruthTable {
    fn check_vars(vars: &[String]) -> Result<()> {
        if vars.len() > MAX_VARS {
            Err(Error::TooManyVariables(vars.len()))
        } else {
            Ok(())
        }
    }

    pub fn zero(vars: Vec<String>) -> Result<Self> {
        Self::check_vars(&vars)?;
        let mask = vec![0; word_count(vars.len())];
        Ok(TruthTable { vars, mask })
    }

    pub fn one(vars: Vec<String>) -> Result<Self> {
        let mut t = Self::zero(vars)?;
        t.mask.iter_mut().for_each(|w| *w = u64::MAX);
        t.trim();
        Ok(t)
    }

    /// The table of the `i`th variable.
    pub fn var(vars: Vec<String>, i: usize) -> Result<Self> {
        let mut t = Self::zero(vars)?;
        if i < 6 {
            const PATTERNS: [u64; 6] = [
                0xAAAA_AAAA_AAAA_AAAA,
                0xCCCC_CCCC_CCCC_CCCC,
                0xF0F0_F0F0_F0F0_F0F0,
                0xFF00_FF00_FF00_FF00,
                0xFFFF_0000_FFFF_0000,
                0xFFFF_FFFF_0000_0000,
            ];
            t.mask.iter_mut().for_each(|w| *w = PATTERNS[i]);
        } else {
            let block = 1usize << (i - 6);
            for (k, w) in t.mask.iter_mut().enumerate() {
                if (k / block) % 2 == 1 {
                    *w = u64::MAX;
                }
            }
        }
        t.trim();
        Ok(t)
    }

    fn trim(&mut self) {
        let n = self.vars.len();
        if let Some(last) = self.mask.last_mut() {
            *last &= tail_mask(n);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_assignments(&self) -> usize {
        1 << self.vars.len()
    }

    pub fn words(&self) -> &[u64] {
        &self.mask
    }

    /// The mask as an integer, for tables of at most six variables.
    pub fn as_u64(&self) -> Option<u64> {
        (self.vars.len() <= 6).then(|| self.mask[0])
    }

    pub fn bit(&self, j: usize) -> bool {
        self.mask[j / 64] & (1 << (j % 64)) != 0
    }

    pub fn count_ones(&self) -> usize {
        self.mask.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.mask.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        self.count_ones() == self.num_assignments()
    }

    pub fn not(&self) -> Self {
        let mut t = self.clone();
        t.mask.iter_mut().for_each(|w| *w = !*w);
        t.trim();
        t
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.vars, other.vars, "truth tables over different variables");
        let mut t = self.clone();
        for (w, o) in t.mask.iter_mut().zip(&other.mask) {
            *w = op(*w, *o);
        }
        t.trim();
        t
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn implies(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| !a | b)
    }

    pub fn iff(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| !(a ^ b))
    }

    /// Whether every assignment satisfying `self` satisfies `other`.
    pub fn entails(&self, other: &Self) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({:?}, ", self.vars)?;
        for w in self.mask.iter().rev() {
            write!(f, "{w:016x}")?;
        }
        f.write_str(")")
    }
}

/// Evaluates `f` under every assignment of `vars`.
pub fn truth_table(f: &Formula, vars: &[String]) -> Result<TruthTable> {
    TruthTable::check_vars(vars)?;
    build(f, vars)
}

fn build(f: &Formula, vars: &[String]) -> Result<TruthTable> {
    Ok(match f {
        Formula::Var(name) => {
            let i = vars
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
            TruthTable::var(vars.to_vec(), i)?
        }
        Formula::Not(g) => build(g, vars)?.not(),
        Formula::And(a, b) => build(a, vars)?.and(&build(b, vars)?),
        Formula::Or(a, b) => build(a, vars)?.or(&build(b, vars)?),
        Formula::Implies(a, b) => build(a, vars)?.implies(&build(b, vars)?),
        Formula::Iff(a, b) => build(a, vars)?.iff(&build(b, vars)?),
    })
}

/// Whether some assignment satisfies every formula. The empty conjunction is
/// the top element and therefore satisfiable.
pub fn conjunction_satisfiable(fs: &[Formula], vars: &[String]) -> Result<bool> {
    let mut meet = TruthTable::one(vars.to_vec())?;
    for f in fs {
        meet = meet.and(&truth_table(f, vars)?);
    }
    Ok(!meet.is_zero())
}
