//! Stabilizer tableau with destabilizers (Aaronson–Gottesman layout).
//!
//! Rows `0..n` are destabilizers and rows `n..2n` are stabilizers; every row is
//! a Hermitian [`PauliOperator`] so its phase is `+1` or `-1`. Row products use
//! the word-parallel phase count in [`crate::pauli`], which keeps a general
//! multi-qubit Pauli measurement at `O(n^2 / 64)` word operations.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitRow, EliminationBasis};
use crate::pauli::PauliOperator;

/// Clifford gates supported by both simulation engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    X(usize),
    Z(usize),
    Cz(usize, usize),
    /// `(control, target)`
    Cnot(usize, usize),
}

impl Gate {
    pub(crate) fn validate(self, n: usize) -> Result<()> {
        let check = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(Error::Index { index: q, len: n })
            }
        };
        match self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Z(q) => check(q),
            Gate::Cz(a, b) | Gate::Cnot(a, b) => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(Error::domain(format!(
                        "two-qubit gate needs distinct targets, got {a} twice"
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<PauliOperator>,
}

impl StabilizerTableau {
    /// The all-zeros state `|0…0⟩`: destabilizers `X_i`, stabilizers `Z_i`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("a tableau needs at least one qubit"));
        }
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            let mut x = BitRow::zeros(n);
            x.set(q, true);
            rows.push(PauliOperator::from_bits(x, BitRow::zeros(n), 0)?);
        }
        for q in 0..n {
            let mut z = BitRow::zeros(n);
            z.set(q, true);
            rows.push(PauliOperator::from_bits(BitRow::zeros(n), z, 0)?);
        }
        Ok(Self { n, rows })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliOperator] {
        &self.rows[self.n..]
    }

    pub fn destabilizers(&self) -> &[PauliOperator] {
        &self.rows[..self.n]
    }

    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        for row in &mut self.rows {
            match gate {
                Gate::H(q) => row.conjugate_h(q),
                Gate::S(q) => row.conjugate_s(q),
                Gate::X(q) => row.conjugate_x(q),
                Gate::Z(q) => row.conjugate_z(q),
                Gate::Cz(a, b) => row.conjugate_cz(a, b),
                Gate::Cnot(c, t) => row.conjugate_cnot(c, t),
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|&g| self.apply(g))
    }

    /// Applies a Pauli operator as a unitary. Rows that anticommute flip sign.
    pub fn apply_pauli(&mut self, op: &PauliOperator) -> Result<()> {
        self.check_dims(op)?;
        for row in &mut self.rows {
            if !row.commutes_unchecked(op) {
                row.negate();
            }
        }
        Ok(())
    }

    fn check_dims(&self, op: &PauliOperator) -> Result<()> {
        if op.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: op.num_qubits(),
            });
        }
        Ok(())
    }

    fn check_observable(&self, op: &PauliOperator) -> Result<()> {
        self.check_dims(op)?;
        if !op.is_hermitian() {
            return Err(Error::domain(format!("{op} is not Hermitian")));
        }
        Ok(())
    }

    fn first_anticommuting_stabilizer(&self, op: &PauliOperator) -> Option<usize> {
        (self.n..2 * self.n).find(|&r| !self.rows[r].commutes_unchecked(op))
    }

    /// Sign of `op` when `±op` is in the stabilizer group.
    fn deterministic_value(&self, op: &PauliOperator) -> i8 {
        let mut acc = PauliOperator::identity(self.n);
        for i in 0..self.n {
            if !self.rows[i].commutes_unchecked(op) {
                acc.mul_assign_unchecked(&self.rows[self.n + i]);
            }
        }
        debug_assert!(acc.eq_up_to_phase(op));
        if acc.phase() == op.phase() {
            1
        } else {
            -1
        }
    }

    /// `+1`/`-1` if `±op` stabilizes the state, `0` otherwise. Non-destructive.
    pub fn expectation(&self, op: &PauliOperator) -> Result<i8> {
        self.check_observable(op)?;
        if self.first_anticommuting_stabilizer(op).is_some() {
            return Ok(0);
        }
        Ok(self.deterministic_value(op))
    }

    /// Projective measurement of a Hermitian Pauli observable.
    ///
    /// Deterministic outcomes leave the tableau untouched and draw nothing from
    /// `rng`; random outcomes consume one boolean.
    pub fn measure<R: Rng + ?Sized>(&mut self, op: &PauliOperator, rng: &mut R) -> Result<i8> {
        self.check_observable(op)?;
        if op.is_identity_up_to_phase() {
            return Err(Error::domain("cannot measure the identity"));
        }
        let Some(pivot) = self.first_anticommuting_stabilizer(op) else {
            return Ok(self.deterministic_value(op));
        };
        let partner = pivot - self.n;
        let pivot_row = self.rows[pivot].clone();
        for i in 0..2 * self.n {
            if i != pivot && i != partner && !self.rows[i].commutes_unchecked(op) {
                self.rows[i].mul_assign_unchecked(&pivot_row);
            }
        }
        let outcome: i8 = if rng.random::<bool>() { -1 } else { 1 };
        self.rows[partner] = pivot_row;
        let mut new_stabilizer = op.clone();
        if outcome == -1 {
            new_stabilizer.negate();
        }
        self.rows[pivot] = new_stabilizer;
        Ok(outcome)
    }

    /// Verifies the symplectic structure: stabilizers commute, destabilizers
    /// commute, `destab_i` anticommutes exactly with `stab_i`, all rows Hermitian
    /// and independent.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        for (i, a) in self.rows.iter().enumerate() {
            if !a.is_hermitian() {
                return Err(Error::Validation(format!("row {i} is not Hermitian: {a}")));
            }
            for (j, b) in self.rows.iter().enumerate().skip(i + 1) {
                let should_anticommute = i < n && j == i + n;
                if a.commutes_unchecked(b) == should_anticommute {
                    return Err(Error::Validation(format!(
                        "rows {i} and {j} have the wrong commutation relation"
                    )));
                }
            }
        }
        let mut basis = EliminationBasis::new(2 * n, 2 * n);
        for (i, row) in self.rows.iter().enumerate() {
            let mut v = BitRow::zeros(2 * n);
            for q in row.x_bits().iter_ones() {
                v.set(q, true);
            }
            for q in row.z_bits().iter_ones() {
                v.set(n + q, true);
            }
            if !basis.insert(v, BitRow::from_indices(2 * n, [i])) {
                return Err(Error::Validation(format!("row {i} is linearly dependent")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::pauli_from_text;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliOperator {
        pauli_from_text(s).unwrap()
    }

    fn stab_texts(t: &StabilizerTableau) -> Vec<String> {
        t.stabilizers().iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn fresh_tableau() {
        assert_eq!(stab_texts(&StabilizerTableau::new(1).unwrap()), ["Z"]);
        let t = StabilizerTableau::new(3).unwrap();
        assert_eq!(stab_texts(&t), ["ZII", "IZI", "IIZ"]);
        for q in 0..3 {
            let x = PauliOperator::uniform(3, &[q], crate::pauli::Pauli::X).unwrap();
            assert_eq!(t.expectation(&x).unwrap(), 0);
        }
        assert_eq!(t.expectation(&p("ZII")).unwrap(), 1);
        assert!(matches!(StabilizerTableau::new(0), Err(Error::Domain(_))));
    }

    #[test]
    fn hadamard_and_cz() {
        let mut t = StabilizerTableau::new(1).unwrap();
        t.apply(Gate::H(0)).unwrap();
        assert_eq!(stab_texts(&t), ["X"]);

        let mut t = StabilizerTableau::new(2).unwrap();
        t.apply_all(&[Gate::H(0), Gate::H(1), Gate::Cz(0, 1)]).unwrap();
        assert_eq!(stab_texts(&t), ["XZ", "ZX"]);
    }

    #[test]
    fn hzh_is_a_bit_flip() {
        let mut t = StabilizerTableau::new(1).unwrap();
        t.apply_all(&[Gate::H(0), Gate::Z(0), Gate::H(0)]).unwrap();
        assert_eq!(stab_texts(&t), ["-Z"]);
        assert_eq!(t.expectation(&p("Z")).unwrap(), -1);
    }

    #[test]
    fn gate_errors() {
        let mut t = StabilizerTableau::new(2).unwrap();
        assert_eq!(t.apply(Gate::H(2)).unwrap_err(), Error::Index { index: 2, len: 2 });
        assert!(matches!(t.apply(Gate::Cz(1, 1)), Err(Error::Domain(_))));
        assert!(matches!(t.expectation(&p("X")), Err(Error::Dimension { .. })));
    }

    #[test]
    fn measurement_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = StabilizerTableau::new(1).unwrap();
        let before = t.clone();
        assert_eq!(t.measure(&p("Z"), &mut rng).unwrap(), 1);
        assert_eq!(t, before);
        assert!(matches!(t.measure(&p("I"), &mut rng), Err(Error::Domain(_))));
        assert!(matches!(t.measure(&p("iZ"), &mut rng), Err(Error::Domain(_))));

        // X on |0> is random but reproducible per seed
        let draw = |seed| {
            let mut t = StabilizerTableau::new(1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = t.measure(&p("X"), &mut rng).unwrap();
            assert_eq!(t.expectation(&p("X")).unwrap(), out);
            out
        };
        for seed in 0..20 {
            assert_eq!(draw(seed), draw(seed));
        }
        let ones = (0..200).filter(|&s| draw(s) == 1).count();
        assert!(ones > 50 && ones < 150, "{ones}");
    }

    #[test]
    fn measuring_a_stabilizer_is_inert() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = StabilizerTableau::new(3).unwrap();
        t.apply_all(&[Gate::H(0), Gate::Cnot(0, 1), Gate::Cnot(1, 2), Gate::S(2)])
            .unwrap();
        let snapshot = t.clone();
        for s in snapshot.stabilizers() {
            assert_eq!(t.measure(s, &mut rng).unwrap(), 1);
        }
        assert_eq!(t, snapshot);
        t.check_invariants().unwrap();
    }

    #[test]
    fn invariants_survive_random_circuits() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let n = rng.random_range(1..=70);
            let mut t = StabilizerTableau::new(n).unwrap();
            for _ in 0..150 {
                let a = rng.random_range(0..n);
                let b = (a + rng.random_range(1..n.max(2))) % n;
                let gate = match rng.random_range(0..7) {
                    0 => Gate::H(a),
                    1 => Gate::S(a),
                    2 => Gate::X(a),
                    3 => Gate::Z(a),
                    4 if n > 1 => Gate::Cz(a, b),
                    5 if n > 1 => Gate::Cnot(a, b),
                    _ => {
                        let mut op = PauliOperator::identity(n);
                        op.set(a, crate::pauli::Pauli::Y);
                        if n > 1 {
                            op.set(b, crate::pauli::Pauli::X);
                        }
                        t.measure(&op, &mut rng).unwrap();
                        continue;
                    }
                };
                t.apply(gate).unwrap();
            }
            t.check_invariants().unwrap();
        }
    }
}
