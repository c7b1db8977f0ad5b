use crate::error::{invalid, Result};
use crate::game::{InputSequence, InputSymbol, Sign};

/// One step's update rule `F(X, a_prev)` as an 8-bit truth table.
///
/// Bit `2·X + bit(a_prev)` holds the output bit (`1` means `-1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct TransitionTable(u8);

impl TransitionTable {
    pub fn from_bits(bits: u8) -> Self {
        TransitionTable(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn from_fn(f: impl Fn(u8, Sign) -> Sign) -> Self {
        let mut bits = 0u8;
        for code in 0..4u8 {
            for prev in [Sign::Plus, Sign::Minus] {
                bits |= f(code, prev).bit() << (2 * code + prev.bit());
            }
        }
        TransitionTable(bits)
    }

    pub fn identity() -> Self {
        Self::from_fn(|_, prev| prev)
    }

    pub fn constant(value: Sign) -> Self {
        Self::from_fn(|_, _| value)
    }

    pub fn apply(self, code: u8, prev: Sign) -> Sign {
        Sign::from_bit(self.0 >> (2 * (code & 3) + prev.bit()))
    }
}

/// Size of the general strategy space for `n` steps: `2 · 256^n`.
pub fn general_space_size(n: usize) -> u64 {
    2u64 << (8 * n)
}

/// Size of the reduced strategy space for `n` steps: `2 · 4^n`.
pub fn reduced_space_size(n: usize) -> u64 {
    2u64 << (2 * n)
}

/// A two-state machine whose state after step `k` depends only on its state
/// before the step and the step's input: `A_k = F_k(X_k, A_{k-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralStrategy {
    a0: Sign,
    tables: Vec<TransitionTable>,
}

impl GeneralStrategy {
    pub fn new(a0: Sign, tables: Vec<TransitionTable>) -> Result<Self> {
        if tables.is_empty() {
            return Err(invalid("a strategy needs at least one step"));
        }
        Ok(GeneralStrategy { a0, tables })
    }

    /// Decodes the integer encoding: step `k` (0-based) in byte `k`, the
    /// initial state in bit `8n`.
    pub fn from_encoding(n: usize, encoding: u64) -> Result<Self> {
        if n == 0 || n > 7 {
            return Err(invalid(format!(
                "general strategy encoding supports 1 <= n <= 7, got {n}"
            )));
        }
        if encoding >= general_space_size(n) {
            return Err(invalid(format!("encoding {encoding:#x} out of range for n = {n}")));
        }
        let tables = (0..n).map(|k| TransitionTable((encoding >> (8 * k)) as u8)).collect();
        Ok(GeneralStrategy {
            a0: Sign::from_bit((encoding >> (8 * n)) as u8),
            tables,
        })
    }

    pub fn encoding(&self) -> u64 {
        let n = self.tables.len();
        let tables: u64 = self
            .tables
            .iter()
            .enumerate()
            .map(|(k, t)| (t.0 as u64) << (8 * k))
            .sum();
        tables | (self.a0.bit() as u64) << (8 * n)
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn initial(&self) -> Sign {
        self.a0
    }

    pub fn tables(&self) -> &[TransitionTable] {
        &self.tables
    }

    /// Applies step `k` (1-based).
    pub fn step(&self, k: usize, a_prev: Sign, sym: InputSymbol) -> Result<Sign> {
        if k == 0 || k > self.tables.len() {
            return Err(invalid(format!("step index {k} outside 1..={}", self.tables.len())));
        }
        Ok(self.tables[k - 1].apply(sym.code(), a_prev))
    }

    /// Final state `A_n` after feeding the whole sequence.
    pub fn run(&self, seq: &InputSequence) -> Result<Sign> {
        if seq.len() != self.tables.len() {
            return Err(invalid(format!(
                "sequence length {} does not match strategy length {}",
                seq.len(),
                self.tables.len()
            )));
        }
        Ok(self
            .tables
            .iter()
            .zip(seq.symbols())
            .fold(self.a0, |a, (t, s)| t.apply(s.code(), a)))
    }
}

/// A strategy of the form `A_n = s0 · ∏_k y_k c_k(x_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedStrategy {
    s0: Sign,
    c: Vec<[Sign; 2]>,
}

impl ReducedStrategy {
    pub fn new(s0: Sign, c: Vec<[Sign; 2]>) -> Result<Self> {
        if c.is_empty() {
            return Err(invalid("a strategy needs at least one step"));
        }
        Ok(ReducedStrategy { s0, c })
    }

    /// Decodes: bit 0 is `s0`, bits `1 + 2k` and `2 + 2k` are `c_k(0)` and
    /// `c_k(1)` (bit set means `-1`).
    pub fn from_encoding(n: usize, encoding: u64) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(invalid(format!(
                "reduced strategy encoding supports 1 <= n <= 31, got {n}"
            )));
        }
        if encoding >= reduced_space_size(n) {
            return Err(invalid(format!("encoding {encoding:#x} out of range for n = {n}")));
        }
        let c = (0..n)
            .map(|k| {
                let bits = (encoding >> (1 + 2 * k)) as u8;
                [Sign::from_bit(bits), Sign::from_bit(bits >> 1)]
            })
            .collect();
        Ok(ReducedStrategy {
            s0: Sign::from_bit(encoding as u8),
            c,
        })
    }

    pub fn encoding(&self) -> u64 {
        let c: u64 = self
            .c
            .iter()
            .enumerate()
            .map(|(k, [c0, c1])| ((c0.bit() | c1.bit() << 1) as u64) << (1 + 2 * k))
            .sum();
        c | self.s0.bit() as u64
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn s0(&self) -> Sign {
        self.s0
    }

    pub fn signs(&self) -> &[[Sign; 2]] {
        &self.c
    }

    pub fn answer(&self, seq: &InputSequence) -> Result<Sign> {
        if seq.len() != self.c.len() {
            return Err(invalid(format!(
                "sequence length {} does not match strategy length {}",
                seq.len(),
                self.c.len()
            )));
        }
        Ok(self
            .c
            .iter()
            .zip(seq.symbols())
            .fold(self.s0, |a, (c, s)| a * s.y() * c[s.x() as usize]))
    }

    /// The same strategy as a two-state machine: `a0 = s0` and
    /// `F_k(X, a) = y · c_k(x) · a`.
    pub fn to_general(&self) -> GeneralStrategy {
        let tables = self
            .c
            .iter()
            .map(|c| {
                TransitionTable::from_fn(|code, prev| {
                    let sym = InputSymbol::from_code_unchecked(code);
                    sym.y() * c[sym.x() as usize] * prev
                })
            })
            .collect();
        GeneralStrategy { a0: self.s0, tables }
    }
}
