use serde::{Deserialize, Serialize};

use crate::field::{FieldElement, FiniteField};

/// Polynomial over a finite field, constant coefficient first. Trailing zero
/// coefficients are stripped, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^deg`.
    pub fn monomial(c: FieldElement, deg: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    /// `x^s - x` over the given field.
    pub fn frobenius_minus_identity(field: &FiniteField, s: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; s + 1];
        coeffs[s] = FieldElement::ONE;
        coeffs[1] = field.sub(coeffs[1], FieldElement::ONE);
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn sub_constant(&self, field: &FiniteField, c: FieldElement) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(FieldElement::ZERO);
        }
        coeffs[0] = field.sub(coeffs[0], c);
        Poly::new(coeffs)
    }

    pub fn scale(&self, field: &FiniteField, c: FieldElement) -> Self {
        Poly::new(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_degrees() {
        let p = Poly::new(vec![FieldElement(1), FieldElement(0), FieldElement(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(p.is_constant());
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::monomial(FieldElement(2), 3).degree(), Some(3));
    }

    #[test]
    fn frobenius_has_linear_term() {
        let f = FiniteField::new(9).unwrap();
        let g = Poly::frobenius_minus_identity(&f, 3);
        assert_eq!(g.degree(), Some(3));
        // x^3 - x vanishes on the prime field
        for c in 0..3 {
            assert!(f.eval(&g, FieldElement(c)).is_zero());
        }
    }
}
