use std::fmt;
use std::sync::Arc;

use crate::arith::{Polynomial, RationalFunction, Vars};

use super::ExteriorError;

#[derive(Clone)]
pub struct Chart(Arc<ChartData>);

struct ChartData {
    name: String,
    vars: Vars,
}

impl Chart {
    pub fn new<I, S>(name: &str, vars: I) -> Result<Self, ExteriorError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars = Vars::new(vars);
        if vars.is_empty() {
            return Err(ExteriorError::InvalidChart(format!("chart `{name}` has no variables")));
        }
        for (i, n) in vars.names().iter().enumerate() {
            if vars.names()[..i].contains(n) {
                return Err(ExteriorError::InvalidChart(format!("variable `{n}` repeated")));
            }
        }
        Ok(Chart(Arc::new(ChartData { name: name.to_string(), vars })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn vars(&self) -> &Vars {
        &self.0.vars
    }

    pub fn dim(&self) -> usize {
        self.0.vars.len()
    }

    /// Coordinate function `x^i`.
    pub fn coordinate(&self, i: usize) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::var_index(self.vars(), i))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars().index_of(name)
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.name == other.0.name && self.0.vars == other.0.vars)
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.vars().names().join(", "))
    }
}

/// Polynomial map `domain → codomain`, given by one image polynomial over
/// the domain variables per codomain variable. Forms pull back from the
/// codomain to the domain.
#[derive(Clone, Debug)]
pub struct ChartMap {
    domain: Chart,
    codomain: Chart,
    images: Vec<Polynomial>,
}

impl ChartMap {
    pub fn new(domain: &Chart, codomain: &Chart, images: Vec<Polynomial>) -> Result<Self, ExteriorError> {
        if images.len() != codomain.dim() {
            return Err(ExteriorError::DegreeMismatch(codomain.dim(), images.len()));
        }
        for p in &images {
            domain.vars().ensure_same(p.vars())?;
        }
        Ok(ChartMap { domain: domain.clone(), codomain: codomain.clone(), images })
    }

    /// The map sending codomain variable `j` to domain variable `index[j]`.
    pub fn coordinate(domain: &Chart, codomain: &Chart, index: &[usize]) -> Result<Self, ExteriorError> {
        let images = index
            .iter()
            .map(|&i| {
                if i < domain.dim() {
                    Ok(Polynomial::var_index(domain.vars(), i))
                } else {
                    Err(ExteriorError::IndexOutOfRange(i, domain.dim()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(domain, codomain, images)
    }

    pub fn domain(&self) -> &Chart {
        &self.domain
    }

    pub fn codomain(&self) -> &Chart {
        &self.codomain
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn pullback_function(&self, f: &RationalFunction) -> Result<RationalFunction, ExteriorError> {
        self.codomain.vars().ensure_same(f.vars())?;
        Ok(f.compose(self.domain.vars(), &self.images)?)
    }

    /// For a coordinate projection, the domain variable each codomain
    /// variable maps to; `None` otherwise.
    pub fn projection_indices(&self) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.images.len());
        for p in &self.images {
            let (m, c) = p.leading_term()?;
            if p.num_terms() != 1 || !num_traits::One::is_one(c) || m.degree() != 1 {
                return None;
            }
            let i = m.0.iter().position(|&e| e == 1)?;
            if out.contains(&i) {
                return None;
            }
            out.push(i);
        }
        Some(out)
    }
}
