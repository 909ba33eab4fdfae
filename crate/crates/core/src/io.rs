//! Serialization glue: the JSON field layout of datasets and the CSV/table
//! formats shared between the test suites and the command-line frontend.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::forward::phase_shifts::PhaseShiftSet;
use crate::forward::subsurface::{InclusionSet, SourceDetectorPairs, SubsurfaceData};
use crate::sfm::support::SupportSamples;
use crate::C64;

#[derive(Serialize, Deserialize)]
struct SubsurfaceDataRepr {
    pairs: Vec<crate::forward::subsurface::Pair>,
    k: f64,
    f_re: Vec<f64>,
    f_im: Vec<f64>,
    noise_level: f64,
}

impl Serialize for SubsurfaceData {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubsurfaceDataRepr {
            pairs: self.pairs.pairs.clone(),
            k: self.pairs.k,
            f_re: self.f.iter().map(|c| c.re).collect(),
            f_im: self.f.iter().map(|c| c.im).collect(),
            noise_level: self.noise_level,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SubsurfaceData {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SubsurfaceDataRepr::deserialize(deserializer)?;
        if repr.f_re.len() != repr.f_im.len() || repr.f_re.len() != repr.pairs.len() {
            return Err(D::Error::custom("f_re/f_im/pairs lengths disagree"));
        }
        let pairs = SourceDetectorPairs::new(repr.pairs, repr.k)
            .map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(SubsurfaceData {
            f: repr
                .f_re
                .iter()
                .zip(&repr.f_im)
                .map(|(re, im)| C64::new(*re, *im))
                .collect(),
            pairs,
            noise_level: repr.noise_level,
        })
    }
}

/// Phase shifts as a two-column CSV with header `l,delta`.
pub fn phase_shifts_to_csv(set: &PhaseShiftSet) -> String {
    let mut out = String::from("l,delta\n");
    for (l, d) in set.shifts.iter().enumerate() {
        out.push_str(&format!("{l},{d:.16e}\n"));
    }
    out
}

/// Parses the `l,delta` CSV back into a shift set at the given wavenumber.
pub fn phase_shifts_from_csv(text: &str, k: f64) -> Result<PhaseShiftSet> {
    let mut shifts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 && line.trim() == "l,delta" {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let l: usize = cols
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::invalid(format!("bad l column on line {}", i + 1)))?;
        let d: f64 = cols
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::invalid(format!("bad delta column on line {}", i + 1)))?;
        if l != shifts.len() {
            return Err(Error::invalid(format!("non-contiguous order {l} on line {}", i + 1)));
        }
        shifts.push(d);
    }
    if shifts.is_empty() {
        return Err(Error::invalid("empty shift table"));
    }
    Ok(PhaseShiftSet { k, shifts })
}

/// Fixed-format inclusion table: positions to three decimals, intensities
/// to five, strongest inclusion first.
pub fn format_inclusion_table(set: &InclusionSet) -> String {
    let sorted = set.clone().sorted_by_intensity();
    let mut out = String::from("x1,x2,x3,v\n");
    for inc in &sorted.items {
        out.push_str(&format!(
            "{:.3},{:.3},{:.3},{:.5}\n",
            inc.z[0], inc.z[1], inc.z[2], inc.v
        ));
    }
    out
}

/// Support samples as a `t,d` CSV.
pub fn support_to_csv(samples: &SupportSamples) -> String {
    let mut out = String::from("t,d\n");
    for (t, d) in samples.angles.iter().zip(&samples.values) {
        out.push_str(&format!("{t:.16e},{d:.16e}\n"));
    }
    out
}

/// 2D point list as an `x1,x2` CSV.
pub fn points_to_csv(points: &[[f64; 2]]) -> String {
    let mut out = String::from("x1,x2\n");
    for p in points {
        out.push_str(&format!("{:.16e},{:.16e}\n", p[0], p[1]));
    }
    out
}

/// Far-field samples as an `angle,a_re,a_im` CSV.
pub fn far_field_to_csv(angles: &[f64], values: &[C64]) -> String {
    let mut out = String::from("angle,a_re,a_im\n");
    for (t, v) in angles.iter().zip(values) {
        out.push_str(&format!("{t:.16e},{:.16e},{:.16e}\n", v.re, v.im));
    }
    out
}
