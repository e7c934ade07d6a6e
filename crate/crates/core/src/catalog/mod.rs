//! Named functions on cones together with the properties claimed for them.
//!
//! Each [`CatalogEntry`] is a recipe: [`instantiate`] resolves its parameters
//! for a dimension and yields an [`Instance`] holding a concrete
//! [`FunctionHandle`] plus the claims that apply to those parameters.

mod entries;
mod label;
mod params;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::cone::ConeSpec;
use crate::diff::FunctionHandle;
use crate::error::{Error, Result};
use crate::point::Point;

pub use label::{LabelStatus, PropertyLabel, DEFAULT_ORDER_CAP};
pub use params::{ParamSpec, ParamValue, Params};

pub type HessianFn = Arc<dyn Fn(&Point) -> Result<Vec<Vec<f64>>> + Send + Sync>;
type BuildFn = Box<dyn Fn(&Params, usize) -> Result<Built> + Send + Sync>;

/// The concrete function produced by an entry's builder.
#[derive(Clone)]
pub struct Built {
    pub handle: FunctionHandle,
    pub hessian: Option<HessianFn>,
}

impl Built {
    pub fn plain(handle: FunctionHandle) -> Self {
        Built { handle, hessian: None }
    }
}

/// A parameter predicate that gates a claim.
#[derive(Clone, Copy)]
pub struct Condition {
    pub text: &'static str,
    pub holds: fn(&Params, usize) -> bool,
}

#[derive(Clone, Copy)]
pub struct Claim {
    pub label: PropertyLabel,
    pub status: LabelStatus,
    pub condition: Option<Condition>,
}

impl Claim {
    pub fn asserted(label: PropertyLabel) -> Self {
        Claim {
            label,
            status: LabelStatus::Asserted,
            condition: None,
        }
    }

    pub fn candidate(label: PropertyLabel) -> Self {
        Claim {
            label,
            status: LabelStatus::RefutedCandidate,
            condition: None,
        }
    }

    pub fn when(mut self, text: &'static str, holds: fn(&Params, usize) -> bool) -> Self {
        self.condition = Some(Condition { text, holds });
        self
    }

    fn active(&self, params: &Params, n: usize) -> bool {
        self.condition.map_or(true, |c| (c.holds)(params, n))
    }
}

/// Admissible dimensions of an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimRule {
    pub default: usize,
    pub min: usize,
    pub max: usize,
}

impl DimRule {
    pub const fn fixed(n: usize) -> Self {
        DimRule { default: n, min: n, max: n }
    }

    pub const fn free(default: usize, min: usize) -> Self {
        DimRule {
            default,
            min,
            max: 64,
        }
    }
}

pub struct CatalogEntry {
    pub id: &'static str,
    pub formula: &'static str,
    pub basis: &'static str,
    pub dim: DimRule,
    pub params: Vec<ParamSpec>,
    pub claims: Vec<Claim>,
    build: BuildFn,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("id", &self.id)
            .field("formula", &self.formula)
            .finish_non_exhaustive()
    }
}

impl CatalogEntry {
    fn new(
        id: &'static str,
        formula: &'static str,
        basis: &'static str,
        dim: DimRule,
        build: impl Fn(&Params, usize) -> Result<Built> + Send + Sync + 'static,
    ) -> Self {
        CatalogEntry {
            id,
            formula,
            basis,
            dim,
            params: Vec::new(),
            claims: Vec::new(),
            build: Box::new(build),
        }
    }

    fn param(mut self, name: &'static str, constraint: &'static str, default: fn(usize) -> ParamValue) -> Self {
        self.params.push(ParamSpec {
            name,
            constraint,
            default,
        });
        self
    }

    fn claim(mut self, c: Claim) -> Self {
        self.claims.push(c);
        self
    }

    /// Instantiates with default parameters and dimension.
    pub fn default_instance(&self) -> Result<Instance> {
        instantiate(self, &Params::new(), None)
    }
}

/// A resolved label on an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResolvedClaim {
    pub label: PropertyLabel,
    pub status: LabelStatus,
}

/// An entry evaluated at concrete parameters and dimension.
#[derive(Clone)]
pub struct Instance {
    pub id: &'static str,
    pub dim: usize,
    pub params: Params,
    pub handle: FunctionHandle,
    pub hessian: Option<HessianFn>,
    pub claims: Vec<ResolvedClaim>,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("id", &self.id)
            .field("dim", &self.dim)
            .field("params", &self.params)
            .field("claims", &self.claims)
            .finish_non_exhaustive()
    }
}

impl Instance {
    pub fn domain(&self) -> &ConeSpec {
        self.handle.domain()
    }

    pub fn status(&self, label: &PropertyLabel) -> Option<LabelStatus> {
        self.claims
            .iter()
            .find(|c| c.label.same_kind(label))
            .map(|c| c.status)
    }

    /// The claimed label of the same kind, carrying the claimed order cap.
    pub fn claimed(&self, label: &PropertyLabel) -> Option<PropertyLabel> {
        self.claims.iter().find(|c| c.label.same_kind(label)).map(|c| c.label)
    }

    pub fn asserted(&self) -> impl Iterator<Item = PropertyLabel> + '_ {
        self.claims
            .iter()
            .filter(|c| c.status == LabelStatus::Asserted)
            .map(|c| c.label)
    }

    pub fn is_scalar(&self) -> bool {
        !self.domain().is_matrix() && self.domain().flat_len() == 1
    }
}

/// Applies the label implications; asserted wins when a label is reached
/// with both statuses.
fn close_claims(active: impl Iterator<Item = (PropertyLabel, LabelStatus)>) -> Vec<ResolvedClaim> {
    let mut out: Vec<ResolvedClaim> = Vec::new();
    let mut push = |label: PropertyLabel, status: LabelStatus| {
        if let Some(existing) = out.iter_mut().find(|c| c.label.same_kind(&label)) {
            if status == LabelStatus::Asserted {
                existing.status = LabelStatus::Asserted;
                existing.label = label;
            }
        } else {
            out.push(ResolvedClaim { label, status });
        }
    };
    for (label, status) in active {
        push(label, status);
        for implied in label.implied() {
            push(*implied, status);
        }
    }
    out
}

/// All built-in entries, in a fixed order.
pub fn builtin_entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(entries::all)
}

pub fn lookup(id: &str) -> Result<&'static CatalogEntry> {
    builtin_entries()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Lookup {
            id: id.to_string(),
            valid: builtin_entries().iter().map(|e| e.id).collect::<Vec<_>>().join(", "),
        })
}

/// Resolves `overrides` against the entry's defaults for dimension `dim`
/// (or the entry's default dimension) and builds the function.
pub fn instantiate(entry: &CatalogEntry, overrides: &Params, dim: Option<usize>) -> Result<Instance> {
    let n = dim.unwrap_or(entry.dim.default);
    if n < entry.dim.min || n > entry.dim.max {
        let constraint = if entry.dim.min == entry.dim.max {
            format!("`{}` is defined for dimension {} only", entry.id, entry.dim.min)
        } else {
            format!("`{}` needs dimension in {}..={}", entry.id, entry.dim.min, entry.dim.max)
        };
        return Err(Error::param("dim", constraint));
    }
    let mut params = Params::new();
    for spec in &entry.params {
        params.0.insert(spec.name.to_string(), (spec.default)(n));
    }
    for (name, value) in &overrides.0 {
        if !params.0.contains_key(name) {
            let valid: Vec<&str> = entry.params.iter().map(|p| p.name).collect();
            let constraint = if valid.is_empty() {
                format!("`{}` takes no parameters", entry.id)
            } else {
                format!("unknown parameter; `{}` accepts {}", entry.id, valid.join(", "))
            };
            return Err(Error::param(name, constraint));
        }
        params.0.insert(name.clone(), value.clone());
    }
    let built = (entry.build)(&params, n)?;
    built.handle.domain().validate()?;
    let claims = close_claims(
        entry
            .claims
            .iter()
            .filter(|c| c.active(&params, n))
            .map(|c| (c.label, c.status)),
    );
    Ok(Instance {
        id: entry.id,
        dim: n,
        params,
        handle: built.handle,
        hessian: built.hessian,
        claims,
    })
}

/// One line of `catalog list`.
#[derive(Debug, Clone, Serialize)]
pub struct EntrySummary {
    pub id: &'static str,
    pub formula: &'static str,
    pub domain: ConeSpec,
    pub params: Params,
    pub labels: Vec<PropertyLabel>,
    pub status: Vec<ResolvedClaim>,
    pub conditions: Vec<String>,
    pub basis: &'static str,
}

pub fn summarize(entry: &CatalogEntry) -> Result<EntrySummary> {
    let inst = entry.default_instance()?;
    Ok(EntrySummary {
        id: entry.id,
        formula: entry.formula,
        domain: inst.domain().clone(),
        params: inst.params.clone(),
        labels: inst.claims.iter().map(|c| c.label).collect(),
        status: inst.claims.clone(),
        conditions: entry
            .claims
            .iter()
            .filter_map(|c| c.condition.map(|k| format!("{}: {}", c.label, k.text)))
            .collect(),
        basis: entry.basis,
    })
}

#[cfg(test)]
mod tests;
