//! JSON interchange: grid fixtures, presentation files and reports.
//!
//! Rationals travel as strings `"num/den"` in lowest terms with a positive
//! denominator, and integers as `"n"`. Input values may also be plain JSON
//! integers. Component indices are 0-based throughout.

use std::fs;
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::finitetype::{alternating_sum_sublinks, diagram_sum, DiagramSum};
use crate::jones::{low_order_grid, GridKey};
use crate::surgery::{integerize, SurgeryReport};
use crate::{
    Component, Error, Integer, JonesGrid, KSeries, MilnorData, RHSInvariants, Rational, Result,
    SlopeClass, SurgeryPresentation,
};

/// Formats `x` as `"n"` or `"num/den"`.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"n"`, `"num/den"` or `"-num/den"`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<Integer>().map_err(|_| bad())?,
            d.trim().parse::<Integer>().map_err(|_| bad())?,
        ),
        None => (s.parse::<Integer>().map_err(|_| bad())?, Integer::one()),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// A rational in input files: a string or a JSON integer.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalValue::Int(n) => Ok(Rational::from_integer((*n).into())),
            RationalValue::Text(s) => parse_rational(s),
        }
    }
}

impl From<&Rational> for RationalValue {
    fn from(x: &Rational) -> Self {
        RationalValue::Text(format_rational(x))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntryFile {
    /// Optional; when present it must equal the multi-index total.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    pub n: i32,
    pub multi: Vec<u32>,
    pub value: RationalValue,
}

/// On-disk form of a [`JonesGrid`].
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct GridFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "N", alias = "components")]
    pub components: usize,
    pub class: String,
    pub order: usize,
    pub entries: Vec<GridEntryFile>,
}

impl GridFile {
    pub fn from_grid(grid: &JonesGrid, name: Option<String>) -> Self {
        let entries = grid
            .entries()
            .map(|(k, v)| GridEntryFile {
                m: Some(k.m),
                n: k.n,
                multi: k.multi.clone(),
                value: v.into(),
            })
            .collect();
        Self {
            name,
            components: grid.components(),
            class: grid.class().to_string(),
            order: grid.order(),
            entries,
        }
    }

    /// Builds the grid; the slope bound is checked later against the
    /// presentation's class.
    pub fn to_grid(&self) -> Result<JonesGrid> {
        let class = SlopeClass::parse(&self.class)?;
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let v = e
                    .value
                    .to_rational()
                    .map_err(|err| Error::Parse(format!("entries[{i}].value: {err}")))?;
                if let Some(m) = e.m {
                    if m != e.multi.iter().sum::<u32>() {
                        return Err(Error::Parse(format!(
                            "entries[{i}]: m = {m} differs from the multi-index total"
                        )));
                    }
                }
                Ok((GridKey::new(e.n, e.multi.clone()), v))
            })
            .collect::<Result<Vec<_>>>()?;
        JonesGrid::from_entries(self.components, class, self.order, entries)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    pub p: i64,
    pub q: i64,
    #[serde(default)]
    pub framing: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MilnorFile {
    /// `[i, j, k, μ_ijk]`.
    #[serde(default)]
    pub triples: Vec<[i64; 4]>,
    /// `[i, j, μ_iijj]`.
    #[serde(default)]
    pub quartic_pairs: Vec<[i64; 3]>,
}

/// `φ_1` values. `singles` lists one value per component; `pairs` and
/// `triples` carry their indices in front of the value.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Phi1File {
    #[serde(default)]
    pub singles: Vec<RationalValue>,
    #[serde(default)]
    pub pairs: Vec<(usize, usize, RationalValue)>,
    #[serde(default)]
    pub triples: Vec<(usize, usize, usize, RationalValue)>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BaseFile {
    #[serde(rename = "S")]
    pub s: Vec<RationalValue>,
    pub ord_h1: u64,
}

/// A grid given by path (relative to the presentation file) or inline.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum JonesSource {
    Path(String),
    Inline(GridFile),
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub class: String,
    pub components: Vec<ComponentFile>,
    #[serde(default)]
    pub linking: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub milnor: Option<MilnorFile>,
    #[serde(default)]
    pub phi1: Option<Phi1File>,
    #[serde(default)]
    pub jones_fixture: Option<JonesSource>,
    pub n_max: usize,
    #[serde(default)]
    pub base: Option<BaseFile>,
}

fn index(i: i64, what: &str) -> Result<usize> {
    usize::try_from(i).map_err(|_| Error::Parse(format!("{what}: negative component index {i}")))
}

impl PresentationFile {
    pub fn milnor_data(&self) -> Result<Option<MilnorData>> {
        if self.milnor.is_none() && self.phi1.is_none() {
            return Ok(None);
        }
        let mut m = MilnorData::new(self.components.len());
        if let Some(mf) = &self.milnor {
            for (t, &[i, j, k, v]) in mf.triples.iter().enumerate() {
                let at = format!("milnor.triples[{t}]");
                m.set_triple(index(i, &at)?, index(j, &at)?, index(k, &at)?, v)?;
            }
            for (t, &[i, j, v]) in mf.quartic_pairs.iter().enumerate() {
                let at = format!("milnor.quartic_pairs[{t}]");
                m.set_quartic(index(i, &at)?, index(j, &at)?, v)?;
            }
        }
        if let Some(pf) = &self.phi1 {
            for (j, v) in pf.singles.iter().enumerate() {
                m.set_phi1_single(j, v.to_rational()?)?;
            }
            for (i, j, v) in &pf.pairs {
                m.set_phi1_pair(*i, *j, v.to_rational()?)?;
            }
            for (i, j, k, v) in &pf.triples {
                m.set_phi1_triple(*i, *j, *k, v.to_rational()?)?;
            }
        }
        Ok(Some(m))
    }

    /// Resolves the file into a validated presentation. `dir` anchors
    /// relative fixture paths.
    pub fn to_presentation(&self, dir: Option<&Path>) -> Result<SurgeryPresentation> {
        let class = SlopeClass::parse(&self.class)?;
        let components = self
            .components
            .iter()
            .map(|c| Component::new(c.p, c.q, c.framing))
            .collect::<Result<Vec<_>>>()?;
        let milnor = self.milnor_data()?;
        let jones = match &self.jones_fixture {
            Some(JonesSource::Inline(g)) => g.to_grid()?,
            Some(JonesSource::Path(p)) => {
                let path = dir.map(|d| d.join(p)).unwrap_or_else(|| PathBuf::from(p));
                read_grid_file(&path)?.to_grid()?
            }
            None => {
                let empty = MilnorData::new(components.len());
                low_order_grid(milnor.as_ref().unwrap_or(&empty), class, self.n_max)?
            }
        };
        let sp = SurgeryPresentation::new(components, self.linking.clone(), class, jones, milnor)?;
        match &self.base {
            Some(b) => Ok(sp.with_base(base_invariants(b)?)),
            None => Ok(sp),
        }
    }
}

fn base_invariants(b: &BaseFile) -> Result<RHSInvariants> {
    let coeffs =
        b.s.iter()
            .map(RationalValue::to_rational)
            .collect::<Result<Vec<_>>>()?;
    let order = coeffs.len().saturating_sub(1);
    RHSInvariants::new(KSeries::from_coeffs(coeffs, order), Integer::from(b.ord_h1))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "{origin}: line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

pub fn parse_grid_file(text: &str, origin: &str) -> Result<GridFile> {
    parse_json(text, origin)
}

pub fn read_grid_file(path: &Path) -> Result<GridFile> {
    parse_grid_file(&read_text(path)?, &path.display().to_string())
}

pub fn parse_presentation_file(text: &str, origin: &str) -> Result<PresentationFile> {
    parse_json(text, origin)
}

/// Reads a presentation file and resolves it, with fixture paths relative to its directory.
pub fn read_presentation(path: &Path) -> Result<(PresentationFile, SurgeryPresentation)> {
    let file = parse_presentation_file(&read_text(path)?, &path.display().to_string())?;
    let sp = file.to_presentation(path.parent())?;
    Ok((file, sp))
}

fn rational_array(values: impl IntoIterator<Item = Rational>) -> Value {
    Value::Array(
        values
            .into_iter()
            .map(|x| Value::String(format_rational(&x)))
            .collect(),
    )
}

fn ord_h1_value(inv: &RHSInvariants) -> Value {
    match u64::try_from(inv.ord_h1()) {
        Ok(n) => json!(n),
        Err(_) => json!(inv.ord_h1().to_string()),
    }
}

/// `S`, `S_int`, `ord_h1` and `lambda_cw` for invariants truncated at their order.
pub fn invariants_json(inv: &RHSInvariants) -> Result<Value> {
    let n_max = inv.order();
    let s_int = (0..=n_max)
        .map(|n| integerize(inv, n).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "S": rational_array((0..=n_max).map(|n| inv.s(n))),
        "S_int": rational_array(s_int),
        "ord_h1": ord_h1_value(inv),
        "lambda_cw": format_rational(&inv.lambda_cw()),
    }))
}

/// Adds `delta_fr` and `delta` (`Δ_0 = 1` first) to [`invariants_json`].
pub fn surgery_report_json(report: &SurgeryReport) -> Result<Value> {
    let mut v = invariants_json(&report.invariants)?;
    v["delta_fr"] = json!(format_rational(&report.delta_fr));
    v["delta"] = rational_array(report.delta.iter().cloned());
    Ok(v)
}

pub fn diagram_sum_json(ds: &DiagramSum) -> Value {
    Value::Array(
        ds.diagrams
            .iter()
            .map(|d| json!({"vertices": d.diagram.vertices, "edges": d.diagram.edges, "weight": d.weight, "milnor_product": d.milnor_product}))
            .collect(),
    )
}

/// The finite-type report: both paths for `S̃_n` and whether they agree.
pub fn finite_type_report(sp: &SurgeryPresentation, n: usize) -> Result<Value> {
    let alt = alternating_sum_sublinks(sp, n)?;
    let ds = diagram_sum(sp, n)?;
    Ok(json!({
        "order": n,
        "alternating_sum": format_rational(&alt),
        "diagram_sum": format_rational(&ds.value),
        "diagrams": diagram_sum_json(&ds),
        "match": alt == ds.value,
    }))
}

/// Serializes with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
