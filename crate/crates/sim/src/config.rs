//! Scenario files.
//!
//! A scenario is a flat TOML document:
//!
//! ```toml
//! scenario = "transfer"
//! kappa = 2.0
//! chi = [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
//! ```
//!
//! Only `scenario` is required. Keys that do not apply to the chosen scenario
//! are rejected.

use std::fmt;
use std::ops::Range;
use std::path::PathBuf;

use qutrit_core::transfer::{ChannelParams, DEFAULT_KAPPA_DT, DEFAULT_KAPPA_T};
use qutrit_core::{Complex64, StateVector};
use serde::Deserialize;
use toml::Spanned;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Transfer,
    Pulses,
    Symmetrize,
    Antisymmetrize,
    Qss,
    Distribute,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Transfer,
        Scenario::Pulses,
        Scenario::Symmetrize,
        Scenario::Antisymmetrize,
        Scenario::Qss,
        Scenario::Distribute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Transfer => "transfer",
            Scenario::Pulses => "pulses",
            Scenario::Symmetrize => "symmetrize",
            Scenario::Antisymmetrize => "antisymmetrize",
            Scenario::Qss => "qss",
            Scenario::Distribute => "distribute",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    fn uses_channel(self) -> bool {
        matches!(
            self,
            Scenario::Transfer | Scenario::Pulses | Scenario::Distribute
        )
    }

    fn uses_chi(self) -> bool {
        matches!(self, Scenario::Transfer | Scenario::Qss)
    }

    fn extension(self) -> &'static str {
        match self {
            Scenario::Pulses => "csv",
            _ => "json",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated scenario with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Present for `transfer`, `pulses` and `distribute`.
    pub channel: Option<ChannelParams>,
    /// Samples of `λ₁` on `[0, T]`; `None` means the constant drive `λ₀`.
    pub lambda1_table: Option<Vec<f64>>,
    /// Input qutrit for `transfer` and `qss`; `None` means draw one from `seed`.
    pub chi: Option<StateVector>,
    pub seed: u64,
    pub output_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub field: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "`{field}`: ")?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<Spanned<String>>,
    kappa: Option<Spanned<Number>>,
    lambda0: Option<Spanned<Number>>,
    t_max: Option<Spanned<Number>>,
    dt: Option<Spanned<Number>>,
    lambda1_table: Option<Spanned<Vec<Number>>>,
    chi: Option<Spanned<Vec<[Number; 2]>>>,
    seed: Option<Spanned<i64>>,
    output_path: Option<Spanned<String>>,
}

/// TOML keeps integers and floats apart; `kappa = 1` should still work.
#[derive(Deserialize, Clone, Copy)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Float(f64),
}

impl Number {
    fn get(self) -> f64 {
        match self {
            Number::Int(i) => i as f64,
            Number::Float(x) => x,
        }
    }
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].bytes().filter(|&b| b == b'\n').count() + 1
    }

    fn err<T>(
        &self,
        field: &str,
        span: Option<Range<usize>>,
        message: impl Into<String>,
    ) -> Result<T, ConfigError> {
        Err(ConfigError {
            field: Some(field.to_string()),
            line: span.map(|s| self.line(s)),
            message: message.into(),
        })
    }
}

fn span<T>(v: &Option<Spanned<T>>) -> Option<Range<usize>> {
    v.as_ref().map(|s| s.span())
}

/// Parses and validates a scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cx = Ctx { text };
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError {
        field: None,
        line: e.span().map(|s| cx.line(s)),
        message: e.message().trim_end().to_string(),
    })?;

    let Some(name) = &raw.scenario else {
        return cx.err("scenario", None, "missing required field");
    };
    let Some(scenario) = Scenario::from_name(name.get_ref()) else {
        let known: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
        return cx.err(
            "scenario",
            Some(name.span()),
            format!(
                "unknown scenario {:?}, expected one of {}",
                name.get_ref(),
                known.join(", ")
            ),
        );
    };

    let channel_fields = [
        ("kappa", span(&raw.kappa)),
        ("lambda0", span(&raw.lambda0)),
        ("t_max", span(&raw.t_max)),
        ("dt", span(&raw.dt)),
        ("lambda1_table", span(&raw.lambda1_table)),
    ];
    if !scenario.uses_channel() {
        if let Some((field, s)) = channel_fields.into_iter().find(|(_, s)| s.is_some()) {
            return cx.err(field, s, format!("not used by the {scenario} scenario"));
        }
    }
    if !scenario.uses_chi() && raw.chi.is_some() {
        return cx.err(
            "chi",
            span(&raw.chi),
            format!("not used by the {scenario} scenario"),
        );
    }

    let lambda1_table = match &raw.lambda1_table {
        Some(t) => {
            let values: Vec<f64> = t.get_ref().iter().map(|n| n.get()).collect();
            if values.is_empty() {
                return cx.err("lambda1_table", Some(t.span()), "must not be empty");
            }
            if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return cx.err(
                    "lambda1_table",
                    Some(t.span()),
                    format!("sample {v} is negative or not finite"),
                );
            }
            Some(values)
        }
        None => None,
    };

    let channel = if scenario.uses_channel() {
        Some(channel_params(&cx, &raw, lambda1_table.as_deref())?)
    } else {
        None
    };

    let chi = match &raw.chi {
        Some(c) => {
            let pairs = c.get_ref();
            if pairs.len() != 3 {
                return cx.err(
                    "chi",
                    Some(c.span()),
                    format!("expected 3 [re, im] pairs, got {}", pairs.len()),
                );
            }
            let amps: Vec<Complex64> = pairs
                .iter()
                .map(|[re, im]| Complex64::new(re.get(), im.get()))
                .collect();
            match StateVector::from_amplitudes(vec![3], amps) {
                Ok(s) => Some(s),
                Err(e) => return cx.err("chi", Some(c.span()), e.to_string()),
            }
        }
        None => None,
    };

    let seed = match &raw.seed {
        Some(s) => match u64::try_from(*s.get_ref()) {
            Ok(v) => v,
            Err(_) => return cx.err("seed", Some(s.span()), "must be a non-negative integer"),
        },
        None => 0,
    };

    let output_path = match &raw.output_path {
        Some(p) if p.get_ref().is_empty() => {
            return cx.err("output_path", Some(p.span()), "must not be empty")
        }
        Some(p) => PathBuf::from(p.get_ref()),
        None => PathBuf::from(format!("{}.{}", scenario.name(), scenario.extension())),
    };

    Ok(ScenarioConfig {
        scenario,
        channel,
        lambda1_table,
        chi,
        seed,
        output_path,
    })
}

fn channel_params(
    cx: &Ctx<'_>,
    raw: &RawConfig,
    table: Option<&[f64]>,
) -> Result<ChannelParams, ConfigError> {
    let value = |v: &Option<Spanned<Number>>| v.as_ref().map(|s| s.get_ref().get());
    let kappa = value(&raw.kappa).unwrap_or(1.0);
    if !(kappa > 0.0 && kappa.is_finite()) {
        return cx.err(
            "kappa",
            span(&raw.kappa),
            format!("must be positive and finite, got {kappa}"),
        );
    }
    // a drive table fixes λ₁(0), so it also supplies the default λ₀
    let lambda0 = value(&raw.lambda0)
        .or(table.map(|t| t[0]))
        .unwrap_or(kappa / std::f64::consts::SQRT_2);
    let t_max = value(&raw.t_max).unwrap_or(DEFAULT_KAPPA_T / kappa);
    let dt = value(&raw.dt).unwrap_or(DEFAULT_KAPPA_DT / kappa);

    let params = ChannelParams::new(kappa, lambda0, t_max, dt).or_else(|e| {
        let field = match &e {
            qutrit_core::Error::InvalidParameter { name, .. } => *name,
            _ => "dt",
        };
        let s = match field {
            "kappa" => span(&raw.kappa),
            "lambda0" => span(&raw.lambda0),
            "t_max" => span(&raw.t_max),
            _ => span(&raw.dt),
        };
        cx.err(field, s, e.to_string())
    })?;

    if let Some(t) = table {
        if (t[0] - lambda0).abs() > 1e-9 * lambda0 {
            return cx.err(
                "lambda1_table",
                span(&raw.lambda1_table),
                format!("first sample {} must equal lambda0 = {lambda0}", t[0]),
            );
        }
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_filled() {
        let c = parse_config("scenario = \"transfer\"\n").unwrap();
        let p = c.channel.unwrap();
        assert_eq!(p.kappa(), 1.0);
        assert_eq!(p.lambda0(), 1.0 / 2f64.sqrt());
        assert_eq!(p.t_max(), 10.0);
        assert!((p.dt() - 0.005).abs() < 1e-15);
        assert_eq!(c.seed, 0);
        assert_eq!(c.chi, None);
        assert_eq!(c.output_path, PathBuf::from("transfer.json"));
    }

    #[test]
    fn defaults_scale_with_kappa() {
        let c = parse_config("scenario = \"pulses\"\nkappa = 2\n").unwrap();
        let p = c.channel.unwrap();
        assert_eq!(p.t_max(), 5.0);
        assert!((p.dt() - 0.0025).abs() < 1e-15);
        assert_eq!(c.output_path, PathBuf::from("pulses.csv"));
    }

    #[test]
    fn coarse_step_rejected_with_field_and_line() {
        let e = parse_config("scenario = \"transfer\"\nt_max = 1.0\ndt = 0.5\n").unwrap_err();
        assert_eq!(e.field.as_deref(), Some("dt"));
        assert_eq!(e.line, Some(3));
    }

    #[test]
    fn unnormalized_chi_rejected() {
        let e = parse_config("scenario = \"qss\"\nchi = [[1, 0], [1, 0], [0, 0]]\n").unwrap_err();
        assert_eq!(e.field.as_deref(), Some("chi"));
        assert_eq!(e.line, Some(2));
    }

    #[test]
    fn unknown_scenario_and_missing_scenario() {
        let e = parse_config("\n\nscenario = \"teleport\"").unwrap_err();
        assert_eq!((e.field.as_deref(), e.line), (Some("scenario"), Some(3)));
        let e = parse_config("kappa = 1.0").unwrap_err();
        assert_eq!(e.field.as_deref(), Some("scenario"));
    }

    #[test]
    fn foreign_fields_rejected() {
        let e = parse_config("scenario = \"symmetrize\"\nkappa = 1.0\n").unwrap_err();
        assert_eq!((e.field.as_deref(), e.line), (Some("kappa"), Some(2)));
        let e =
            parse_config("scenario = \"pulses\"\nchi = [[1, 0], [0, 0], [0, 0]]\n").unwrap_err();
        assert_eq!(e.field.as_deref(), Some("chi"));
        let e = parse_config("scenario = \"qss\"\ncolour = \"red\"\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert!(e.message.contains("colour"), "{e}");
    }

    #[test]
    fn table_supplies_lambda0() {
        let c = parse_config("scenario = \"pulses\"\nlambda1_table = [0.5, 0.5, 0.4]\n").unwrap();
        assert_eq!(c.channel.unwrap().lambda0(), 0.5);
        let e = parse_config("scenario = \"pulses\"\nlambda0 = 0.7\nlambda1_table = [0.5, 0.4]\n")
            .unwrap_err();
        assert_eq!(
            (e.field.as_deref(), e.line),
            (Some("lambda1_table"), Some(3))
        );
    }

    #[test]
    fn type_errors_carry_line() {
        let e = parse_config("scenario = \"transfer\"\nkappa = \"fast\"\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        let e = parse_config("scenario = \"qss\"\nseed = -4\n").unwrap_err();
        assert_eq!((e.field.as_deref(), e.line), (Some("seed"), Some(2)));
    }
}
