//! Phase-exact Pauli strings in binary symplectic form.
//!
//! An operator is `i^phase * P_0 ⊗ P_1 ⊗ … ⊗ P_{n-1}` where qubit `j` carries
//! `(x_j, z_j)`: `(0,0) = I`, `(1,0) = X`, `(0,1) = Z`, `(1,1) = Y`. Note that
//! the `(1,1)` encoding is the Hermitian `Y`, not the product `XZ = -iY`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gf2::BitRow;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: BitRow,
    z: BitRow,
    /// Exponent of `i`, always in `0..4`.
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            x: BitRow::zeros(n),
            z: BitRow::zeros(n),
            phase: 0,
        }
    }

    /// Operator acting as `pauli` on each listed qubit and identity elsewhere.
    pub fn from_sparse(n: usize, terms: &[(usize, Pauli)]) -> Result<Self> {
        let mut op = Self::identity(n);
        for &(q, p) in terms {
            if q >= n {
                return Err(Error::Index { index: q, len: n });
            }
            op.set(q, p);
        }
        Ok(op)
    }

    /// Product of the same single-qubit Pauli over a set of qubits.
    pub fn uniform(n: usize, qubits: &[usize], pauli: Pauli) -> Result<Self> {
        let terms: Vec<_> = qubits.iter().map(|&q| (q, pauli)).collect();
        Self::from_sparse(n, &terms)
    }

    pub fn from_bits(x: BitRow, z: BitRow, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self {
            n: x.len(),
            x,
            z,
            phase: phase & 3,
        })
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_factor(&self) -> Complex64 {
        match self.phase {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Hermitian iff the phase is real.
    #[inline]
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn x_bits(&self) -> &BitRow {
        &self.x
    }

    pub fn z_bits(&self) -> &BitRow {
        &self.z
    }

    #[inline]
    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    #[inline]
    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Qubits on which the operator acts non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) & 3;
    }

    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.negate();
        out
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        let mut parity = 0u32;
        for i in 0..self.x.words().len() {
            let anti = (self.x.words()[i] & other.z.words()[i])
                ^ (self.z.words()[i] & other.x.words()[i]);
            parity ^= anti.count_ones();
        }
        parity & 1 == 0
    }

    /// `self <- self · rhs`, phase included.
    pub(crate) fn mul_assign_unchecked(&mut self, rhs: &Self) {
        let shift = product_phase_shift(self, rhs);
        let phase = self.phase as u32 + rhs.phase as u32 + shift;
        self.x.xor_assign(&rhs.x);
        self.z.xor_assign(&rhs.z);
        self.phase = (phase & 3) as u8;
    }

    /// Matrix product `self · rhs`.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.check_dims(rhs)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(rhs);
        Ok(out)
    }

    /// Same Pauli letters on every qubit, ignoring phase.
    pub fn eq_up_to_phase(&self, other: &Self) -> bool {
        self.x == other.x && self.z == other.z
    }

    // Clifford conjugation rules, P -> U P U†.

    pub(crate) fn conjugate_h(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && z {
            self.negate();
        }
        self.x.set(q, z);
        self.z.set(q, x);
    }

    pub(crate) fn conjugate_s(&mut self, q: usize) {
        let (x, z) = (self.x.get(q), self.z.get(q));
        if x && z {
            self.negate();
        }
        self.z.set(q, z ^ x);
    }

    pub(crate) fn conjugate_x(&mut self, q: usize) {
        if self.z.get(q) {
            self.negate();
        }
    }

    pub(crate) fn conjugate_z(&mut self, q: usize) {
        if self.x.get(q) {
            self.negate();
        }
    }

    pub(crate) fn conjugate_cz(&mut self, a: usize, b: usize) {
        let (xa, za, xb, zb) = (self.x.get(a), self.z.get(a), self.x.get(b), self.z.get(b));
        if xa && xb && (za ^ zb) {
            self.negate();
        }
        self.z.set(a, za ^ xb);
        self.z.set(b, zb ^ xa);
    }

    pub(crate) fn conjugate_cnot(&mut self, c: usize, t: usize) {
        let (xc, zc, xt, zt) = (self.x.get(c), self.z.get(c), self.x.get(t), self.z.get(t));
        if xc && zt && !(xt ^ zc) {
            self.negate();
        }
        self.x.set(t, xt ^ xc);
        self.z.set(c, zc ^ zt);
    }
}

/// Exponent of `i` picked up when multiplying the letters of `a` by those of `b`.
///
/// The cyclic products `XY = iZ`, `YZ = iX`, `ZX = iY` contribute `+1`; the
/// reversed orders contribute `-1`. Counted word-parallel by popcount.
#[inline]
fn product_phase_shift(a: &PauliOperator, b: &PauliOperator) -> u32 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    let (ax, az, bx, bz) = (a.x.words(), a.z.words(), b.x.words(), b.z.words());
    for i in 0..ax.len() {
        let (ax, az, bx, bz) = (ax[i], az[i], bx[i], bz[i]);
        let (a_x, a_y, a_z) = (ax & !az, ax & az, !ax & az);
        let (b_x, b_y, b_z) = (bx & !bz, bx & bz, !bx & bz);
        plus += ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones();
        minus += ((a_y & b_x) | (a_z & b_y) | (a_x & b_z)).count_ones();
    }
    (plus + 3 * minus) & 3
}

/// Parses `[+|-][i]` followed by letters from `{I, X, Y, Z}`; qubit 0 first.
pub fn pauli_from_text(text: &str) -> Result<PauliOperator> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut phase = 0u8;
    match chars.first() {
        Some('+') => pos = 1,
        Some('-') => {
            phase = 2;
            pos = 1;
        }
        _ => {}
    }
    if chars.get(pos) == Some(&'i') {
        phase += 1;
        pos += 1;
    }
    if pos >= chars.len() {
        return Err(Error::Parse {
            position: pos,
            message: "expected at least one Pauli letter".into(),
        });
    }
    let mut op = PauliOperator::identity(chars.len() - pos);
    for (q, &c) in chars[pos..].iter().enumerate() {
        let p = match c {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            other => {
                return Err(Error::Parse {
                    position: pos + q,
                    message: format!("invalid Pauli letter `{other}`"),
                })
            }
        };
        op.set(q, p);
    }
    op.phase = phase & 3;
    Ok(op)
}

pub fn pauli_to_text(op: &PauliOperator) -> String {
    op.to_string()
}

impl FromStr for PauliOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        pauli_from_text(s)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let xz = p("XZ");
        assert_eq!(xz.get(0), Pauli::X);
        assert_eq!(xz.get(1), Pauli::Z);
        assert_eq!(xz.phase(), 0);

        let id = p("II");
        assert!(id.is_identity_up_to_phase());
        assert_eq!(id.num_qubits(), 2);

        let my = p("-Y");
        assert_eq!(my.get(0), Pauli::Y);
        assert_eq!(my.phase(), 2);
    }

    #[test]
    fn parse_errors_name_position() {
        assert_eq!(
            pauli_from_text("XQZ").unwrap_err(),
            Error::Parse {
                position: 1,
                message: "invalid Pauli letter `Q`".into()
            }
        );
        assert!(matches!(
            pauli_from_text("-iXa"),
            Err(Error::Parse { position: 3, .. })
        ));
        assert!(matches!(pauli_from_text(""), Err(Error::Parse { position: 0, .. })));
        assert!(matches!(pauli_from_text("-"), Err(Error::Parse { position: 1, .. })));
    }

    #[test]
    fn single_qubit_products() {
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("-iY"));
        assert_eq!(p("X").multiply(&p("X")).unwrap(), p("I"));
        assert_eq!(p("XI").multiply(&p("IZ")).unwrap(), p("XZ"));
        assert_eq!(p("Z").multiply(&p("X")).unwrap(), p("iY"));
        assert_eq!(p("Y").multiply(&p("Y")).unwrap(), p("I"));
    }

    #[test]
    fn multiply_dimension_error() {
        assert_eq!(
            p("X").multiply(&p("XX")).unwrap_err(),
            Error::Dimension {
                expected: 1,
                found: 2
            }
        );
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XI").commutes(&p("IZ")).unwrap());
        // K_1 = X1 Z7 Z8 and K_2 = X2 Z7 Z8 of the eight-qubit cluster
        let k1 = p("XIIIIIZZ");
        let k2 = p("IXIIIIZZ");
        assert!(k1.commutes(&k2).unwrap());
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(letters, phase)| {
            let mut op = PauliOperator::identity(letters.len());
            for (q, l) in letters.into_iter().enumerate() {
                op.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]);
            }
            op.phase = phase & 3;
            op
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn text_round_trip(op in arb_pauli(70)) {
            prop_assert_eq!(pauli_from_text(&pauli_to_text(&op)).unwrap(), op);
        }

        #[test]
        fn multiplication_is_associative(a in arb_pauli(67), b in arb_pauli(67), c in arb_pauli(67)) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn identity_is_two_sided(a in arb_pauli(9)) {
            let id = PauliOperator::identity(9);
            prop_assert_eq!(a.multiply(&id).unwrap(), a.clone());
            prop_assert_eq!(id.multiply(&a).unwrap(), a);
        }

        #[test]
        fn commutation_matches_product_order(a in arb_pauli(13), b in arb_pauli(13)) {
            let ab = a.multiply(&b).unwrap();
            let ba = b.multiply(&a).unwrap();
            prop_assert!(ab.eq_up_to_phase(&ba));
            prop_assert_eq!(a.commutes(&b).unwrap(), ab == ba);
        }
    }
}
