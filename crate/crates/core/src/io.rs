//! JSON forms of polynomials and series.
//!
//! ```json
//! {"degree": 2, "terms": [{"index": [[1,1],[3,1]], "re": 2.0, "im": 0.0}]}
//! {"parts": [<polynomial>, ...]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::multiindex::MultiIndex;
use crate::polynomial::{Complex64, Poly64, Series64, TaylorSeries};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub index: MultiIndex,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub parts: Vec<PolynomialJson>,
}

impl PolynomialJson {
    pub fn into_polynomial(self) -> Result<Poly64> {
        Poly64::from_terms(
            self.degree,
            self.terms.into_iter().map(|t| (t.index, Complex64::new(t.re, t.im))),
        )
    }
}

impl From<&Poly64> for PolynomialJson {
    fn from(p: &Poly64) -> Self {
        Self {
            degree: p.degree(),
            terms: p
                .terms()
                .map(|(index, c)| TermJson {
                    index: index.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl SeriesJson {
    pub fn into_series(self) -> Result<Series64> {
        let parts = self
            .parts
            .into_iter()
            .map(PolynomialJson::into_polynomial)
            .collect::<Result<_>>()?;
        TaylorSeries::new(parts)
    }
}

impl From<&Series64> for SeriesJson {
    fn from(f: &Series64) -> Self {
        Self {
            parts: f.parts().iter().map(PolynomialJson::from).collect(),
        }
    }
}

pub fn polynomial_from_json(text: &str) -> Result<Poly64> {
    serde_json::from_str::<PolynomialJson>(text)?.into_polynomial()
}

pub fn polynomial_to_json(p: &Poly64) -> Result<String> {
    Ok(serde_json::to_string(&PolynomialJson::from(p))?)
}

pub fn series_from_json(text: &str) -> Result<Series64> {
    serde_json::from_str::<SeriesJson>(text)?.into_series()
}

pub fn series_to_json(f: &Series64) -> Result<String> {
    Ok(serde_json::to_string(&SeriesJson::from(f))?)
}
