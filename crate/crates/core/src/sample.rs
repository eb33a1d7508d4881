use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// What a [`SampleSet`] holds draws of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    Interval,
    InDegree,
    PageRankModel,
    LowerBound,
    PageRank,
    OutDegree,
    Other,
}

impl SampleSource {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleSource::Interval => "T",
            SampleSource::InDegree => "N(T)",
            SampleSource::PageRankModel => "R",
            SampleSource::LowerBound => "lower-bound",
            SampleSource::PageRank => "pagerank",
            SampleSource::OutDegree => "out-degree",
            SampleSource::Other => "other",
        }
    }
}

impl fmt::Display for SampleSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SampleSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "T" => SampleSource::Interval,
            "N(T)" => SampleSource::InDegree,
            "R" => SampleSource::PageRankModel,
            "lower-bound" => SampleSource::LowerBound,
            "pagerank" => SampleSource::PageRank,
            "out-degree" => SampleSource::OutDegree,
            "other" => SampleSource::Other,
            _ => return Err(Error::Parameter(format!("unknown sample source {s:?}"))),
        })
    }
}

/// Tagged collection of nonnegative samples.
///
/// `spec` is a free-form description of the generating configuration; it is
/// carried into the text export so a file can be traced back to its run.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet<F> {
    pub source: SampleSource,
    pub seed: Option<u64>,
    pub spec: String,
    pub values: Vec<F>,
}

impl<F: Scalar> SampleSet<F> {
    pub fn new(source: SampleSource, seed: Option<u64>, spec: impl Into<String>, values: Vec<F>) -> Self {
        Self { source, seed, spec: spec.into(), values }
    }

    /// Untagged samples, mostly for tests and ad-hoc analysis.
    pub fn from_values(values: Vec<F>) -> Self {
        Self::new(SampleSource::Other, None, "", values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> F {
        if self.values.is_empty() {
            return F::nan();
        }
        self.values.iter().copied().sum::<F>() / F::from_count(self.values.len())
    }

    /// Standard error of the sample mean.
    pub fn standard_error(&self) -> F {
        let n = self.values.len();
        if n < 2 {
            return F::nan();
        }
        let mean = self.mean();
        let ss: F = self.values.iter().map(|&v| (v - mean) * (v - mean)).sum();
        (ss / F::from_count(n - 1) / F::from_count(n)).sqrt()
    }

    pub fn min(&self) -> F {
        self.values.iter().copied().fold(F::infinity(), F::min)
    }

    pub fn max(&self) -> F {
        self.values.iter().copied().fold(F::neg_infinity(), F::max)
    }

    /// Values sorted ascending.
    pub fn sorted(&self) -> Vec<F> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.partial_cmp(b).expect("NaN in samples"));
        v
    }

    /// Writes `#`-prefixed header lines (source, seed, spec, count) followed
    /// by one value per line.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# source: {}", self.source)?;
        match self.seed {
            Some(s) => writeln!(out, "# seed: {s}")?,
            None => writeln!(out, "# seed: none")?,
        }
        writeln!(out, "# spec: {}", self.spec.replace('\n', " "))?;
        writeln!(out, "# count: {}", self.values.len())?;
        for v in &self.values {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }

    /// Parses the format produced by [`SampleSet::write_text`]. Unknown
    /// comment lines are ignored; a count header, when present, must match.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut set = SampleSet::from_values(Vec::new());
        let mut declared = None;
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                let Some((key, value)) = comment.split_once(':') else { continue };
                let value = value.trim();
                match key.trim() {
                    "source" => set.source = value.parse()?,
                    "seed" if value != "none" => {
                        set.seed = Some(
                            value
                                .parse()
                                .map_err(|_| Error::Parse { line: lineno, message: format!("bad seed {value:?}") })?,
                        )
                    }
                    "spec" => set.spec = value.to_string(),
                    "count" => {
                        declared = Some(
                            value
                                .parse::<usize>()
                                .map_err(|_| Error::Parse { line: lineno, message: format!("bad count {value:?}") })?,
                        )
                    }
                    _ => {}
                }
                continue;
            }
            let v: f64 = trimmed
                .parse()
                .map_err(|_| Error::Parse { line: lineno, message: format!("not a number: {trimmed:?}") })?;
            set.values.push(F::lit(v));
        }
        if let Some(n) = declared {
            if n != set.values.len() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("header declares {n} values, found {}", set.values.len()),
                });
            }
        }
        Ok(set)
    }
}
