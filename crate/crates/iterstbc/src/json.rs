//! Lossless JSON forms of exact values.
//!
//! Rationals are strings `"p/q"`; cyclotomic elements are
//! `{"conductor": N, "coeffs": [...]}` over the power basis of ζ_N.

use std::sync::Arc;

use iterstbc_core::{CycloElement, CycloField, DElement, Matrix, Rational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"` or an integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Validation(format!("malformed rational {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloJson {
    pub conductor: u32,
    pub coeffs: Vec<String>,
}

impl CycloJson {
    /// Trailing zero coefficients are dropped.
    pub fn from_element(x: &CycloElement) -> Self {
        let mut coeffs = x.coeffs();
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { conductor: x.conductor(), coeffs: coeffs.iter().map(rational_to_string).collect() }
    }

    pub fn to_element(&self, field: &Arc<CycloField>) -> Result<CycloElement, CliError> {
        if self.conductor != field.conductor() {
            return Err(CliError::Validation(format!(
                "element has conductor {} but the field has conductor {}",
                self.conductor,
                field.conductor()
            )));
        }
        let coeffs = self.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>, _>>()?;
        Ok(field.from_coeffs(&coeffs)?)
    }
}

pub fn d_element_json(x: &DElement) -> Vec<CycloJson> {
    x.coords().iter().map(CycloJson::from_element).collect()
}

pub fn matrix_json(m: &Matrix<CycloElement>) -> Vec<Vec<CycloJson>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(CycloJson::from_element).collect()).collect()
}

/// `[re, im]` pairs.
pub fn complex_matrix_json(m: &Matrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect()).collect()
}

/// Whether a rational is an integer, used for compact reporting.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}
