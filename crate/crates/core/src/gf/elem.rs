use std::fmt;

use super::Field;
use crate::error::{Error, Result};

/// A field element tied to its field. Arithmetic between elements of different
/// fields is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: u32,
}

impl FieldElem {
    pub(crate) fn from_parts(field: Field, value: u32) -> Self {
        FieldElem { field, value }
    }

    pub fn zero(field: &Field) -> Self {
        FieldElem::from_parts(field.clone(), 0)
    }

    pub fn one(field: &Field) -> Self {
        FieldElem::from_parts(field.clone(), 1)
    }

    /// Builds an element from its coefficient list over the prime field.
    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<Self> {
        Ok(FieldElem::from_parts(field.clone(), field.from_prime_coeffs(coeffs)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Coefficients over the prime field in the polynomial basis, low-to-high.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.prime_coeffs(self.value)
    }

    fn same(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )))
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(FieldElem::from_parts(
            self.field.clone(),
            self.field.add(self.value, other.value),
        ))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(FieldElem::from_parts(
            self.field.clone(),
            self.field.sub(self.value, other.value),
        ))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(FieldElem::from_parts(
            self.field.clone(),
            self.field.mul(self.value, other.value),
        ))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same(other)?;
        Ok(FieldElem::from_parts(
            self.field.clone(),
            self.field.div(self.value, other.value)?,
        ))
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem::from_parts(self.field.clone(), self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(FieldElem::from_parts(
            self.field.clone(),
            self.field.inv(self.value)?,
        ))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem::from_parts(self.field.clone(), self.field.pow(self.value, e))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈{}", self.value, self.field)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            return write!(f, "{}", self.value);
        }
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatched_fields_rejected() {
        let a = FieldElem::one(&Field::new(5, 1).unwrap());
        let b = FieldElem::one(&Field::new(7, 1).unwrap());
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(_))));
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn coefficient_view() {
        let f = Field::new(2, 2).unwrap();
        let x = FieldElem::from_coeffs(&f, &[0, 1]).unwrap();
        assert_eq!(x.mul(&x).unwrap().coeffs(), vec![1, 1]);
        assert_eq!(x.to_string(), "x");
        assert!(FieldElem::from_coeffs(&f, &[0, 2]).is_err());
        assert!(FieldElem::zero(&f).inv().is_err());
    }
}
