//! Forms and vector fields on the mapping space `F(S, M)`.

use std::fmt;
use std::sync::Arc;

use super::point::{MapPoint, MapTangent};
use crate::error::{Error, Result};

type MapEval = dyn Fn(&MapPoint, &[&MapTangent]) -> Result<f64> + Send + Sync;
type FieldEval = dyn Fn(&MapPoint) -> Result<MapTangent> + Send + Sync;

/// An `n`-form on `F(S, M)`: a map from a base point and `n` tangents to a real.
#[derive(Clone)]
pub struct MapSpaceForm {
    degree: usize,
    tag: String,
    eval: Arc<MapEval>,
}

impl fmt::Debug for MapSpaceForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapSpaceForm").field("degree", &self.degree).field("tag", &self.tag).finish()
    }
}

impl MapSpaceForm {
    pub fn new<F>(degree: usize, tag: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&MapPoint, &[&MapTangent]) -> Result<f64> + Send + Sync + 'static,
    {
        Self { degree, tag: tag.into(), eval: Arc::new(eval) }
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(degree, "0", |_, _| Ok(0.0))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn eval(&self, f: &MapPoint, ys: &[&MapTangent]) -> Result<f64> {
        if ys.len() != self.degree {
            return Err(Error::Degree(format!("{} has degree {} but got {} tangents", self.tag, self.degree, ys.len())));
        }
        for y in ys {
            f.check_tangent(y)?;
        }
        (self.eval)(f, ys)
    }

    pub fn eval_owned(&self, f: &MapPoint, ys: &[MapTangent]) -> Result<f64> {
        let refs: Vec<&MapTangent> = ys.iter().collect();
        self.eval(f, &refs)
    }

    pub fn scale(&self, c: f64) -> Self {
        let a = self.clone();
        Self::new(self.degree, format!("{c}·{}", self.tag), move |f, ys| Ok(c * a.eval(f, ys)?))
    }

    pub fn add(&self, other: &MapSpaceForm) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Degree(format!("cannot add degrees {} and {}", self.degree, other.degree)));
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(Self::new(self.degree, format!("{} + {}", self.tag, other.tag), move |f, ys| {
            Ok(a.eval(f, ys)? + b.eval(f, ys)?)
        }))
    }

    pub fn sub(&self, other: &MapSpaceForm) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }
}

/// A vector field on `F(S, M)`.
#[derive(Clone)]
pub struct MapField {
    tag: String,
    eval: Arc<FieldEval>,
}

impl fmt::Debug for MapField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapField").field("tag", &self.tag).finish()
    }
}

impl MapField {
    pub fn new<F>(tag: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&MapPoint) -> Result<MapTangent> + Send + Sync + 'static,
    {
        Self { tag: tag.into(), eval: Arc::new(eval) }
    }

    /// The constant field `f ↦ y`.
    pub fn constant(y: MapTangent) -> Self {
        Self::new("const", move |_| Ok(y.clone()))
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn at(&self, f: &MapPoint) -> Result<MapTangent> {
        let y = (self.eval)(f)?;
        f.check_tangent(&y)?;
        Ok(y)
    }

    pub fn add(&self, other: &MapField) -> MapField {
        let (a, b) = (self.clone(), other.clone());
        MapField::new(format!("{} + {}", self.tag, other.tag), move |f| a.at(f)?.add(&b.at(f)?))
    }
}
