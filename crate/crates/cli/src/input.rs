//! Command-line values: angles, grids, beta ranges and state specifications.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use stellar_core::error::StellarError;
use stellar_core::measures::{ghz_state, rec_family_state, tetrahedron_state};
use stellar_core::state::{coherent_state, dicke_state, project_sym, FullState, QubitState, SymmetricState};
use stellar_core::stellar::{Constellation, Star};

use crate::output::{ConstellationJson, StateJson};
use crate::CliError;

/// Decimal radians or a rational multiple of pi: `0.5`, `pi`, `-pi/2`, `2pi/3`, `0.25*pi`.
pub fn angle(src: &str) -> Result<f64, CliError> {
    let bad = || CliError::Usage(format!("invalid angle {src:?}, expected a number or a multiple of pi such as 2pi/3"));
    let s = src.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = match body.find("pi") {
        None => body.parse::<f64>().map_err(|_| bad())?,
        Some(at) => {
            let head = body[..at].trim_end_matches('*');
            let factor = if head.is_empty() { 1.0 } else { head.parse::<f64>().map_err(|_| bad())? };
            let tail = &body[at + 2..];
            let divisor = match tail.strip_prefix('/') {
                Some(d) => d.parse::<f64>().map_err(|_| bad())?,
                None if tail.is_empty() => 1.0,
                None => return Err(bad()),
            };
            factor * PI / divisor
        }
    };
    if value.is_finite() {
        Ok(sign * value)
    } else {
        Err(bad())
    }
}

/// `AxB`, both sides at least 2.
pub fn grid(src: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("invalid grid {src:?}, expected ROWSxCOLS with both at least 2"));
    let (a, b) = src.split_once(['x', 'X']).ok_or_else(bad)?;
    let (a, b) = (a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?);
    if a < 2 || b < 2 {
        return Err(bad());
    }
    Ok((a, b))
}

/// `START:STOP:COUNT` (COUNT points including both ends) or a comma list.
pub fn betas(src: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = src.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid point count {count:?} in {src:?}")))?;
            if count < 2 {
                return Err(CliError::Usage(format!("beta range {src:?} needs at least 2 points")));
            }
            let (a, b) = (angle(start)?, angle(stop)?);
            Ok((0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect())
        }
        [_] => src.split(',').map(angle).collect(),
        _ => Err(CliError::Usage(format!("invalid beta grid {src:?}, expected START:STOP:COUNT or a comma list"))),
    }
}

fn count(src: &str) -> Result<usize, CliError> {
    src.parse().map_err(|_| CliError::Usage(format!("invalid integer {src:?}")))
}

fn bell(which: &str) -> Result<SymmetricState, CliError> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let d = match which {
        "psi+" => return Ok(dicke_state(2, 1)?),
        "phi+" => vec![Complex64::new(r, 0.0), z, Complex64::new(r, 0.0)],
        "phi-" => vec![Complex64::new(r, 0.0), z, Complex64::new(-r, 0.0)],
        "psi-" => {
            return Err(StellarError::Domain {
                op: "bell",
                msg: "psi- is antisymmetric and has no Majorana constellation".into(),
            }
            .into())
        }
        other => {
            return Err(CliError::Usage(format!("unknown Bell state {other:?}, expected psi+, psi-, phi+ or phi-")))
        }
    };
    Ok(SymmetricState::from_dicke(d)?)
}

/// Named state: `ghz N`, `w N`, `dicke N K`, `bell psi+|psi-|phi+|phi-`,
/// `tetra`, `rec4 THETA PHI`, `coherent N THETA PHI`, or a bit string.
pub fn named_state(tokens: &[String]) -> Result<SymmetricState, CliError> {
    let Some((head, args)) = tokens.split_first() else {
        return Err(CliError::Usage("empty state specification".into()));
    };
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(CliError::Usage(format!("state {head:?} takes {n} argument(s), got {}", args.len())))
        }
    };
    let state = match head.as_str() {
        "ghz" => {
            arity(1)?;
            ghz_state(count(&args[0])?)?
        }
        "w" => {
            arity(1)?;
            dicke_state(count(&args[0])?, 1)?
        }
        "dicke" => {
            arity(2)?;
            dicke_state(count(&args[0])?, count(&args[1])?)?
        }
        "bell" => {
            arity(1)?;
            bell(&args[0])?
        }
        "tetra" => {
            arity(0)?;
            tetrahedron_state()?
        }
        "rec4" => {
            arity(2)?;
            rec_family_state(angle(&args[0])?, angle(&args[1])?)?
        }
        "coherent" => {
            arity(3)?;
            coherent_state(count(&args[0])?, &QubitState::new(angle(&args[1])?, angle(&args[2])?))?
        }
        bits if bits.chars().all(|c| c == '0' || c == '1') => {
            arity(0)?;
            project_sym(&FullState::basis(bits)?)?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown state {other:?}, expected ghz, w, dicke, bell, tetra, rec4, coherent or a bit string"
            )))
        }
    };
    Ok(state)
}

/// Splits consecutive state specifications using the arity of each form.
pub fn split_specs(tokens: &[String]) -> Result<Vec<Vec<String>>, CliError> {
    let mut specs = Vec::new();
    let mut rest = tokens;
    while let Some(head) = rest.first() {
        let arity = match head.as_str() {
            "ghz" | "w" | "bell" => 1,
            "dicke" | "rec4" => 2,
            "coherent" => 3,
            _ => 0,
        };
        if rest.len() <= arity {
            return Err(CliError::Usage(format!("state {head:?} takes {arity} argument(s)")));
        }
        specs.push(rest[..=arity].to_vec());
        rest = &rest[arity + 1..];
    }
    Ok(specs)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn state_file(path: &Path) -> Result<SymmetricState, CliError> {
    let parsed: StateJson = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Usage(format!("{}: not a state JSON document: {e}", path.display())))?;
    if parsed.dicke.len() != parsed.n + 1 {
        return Err(CliError::Usage(format!(
            "{}: n = {} needs {} Dicke coefficients, found {}",
            path.display(),
            parsed.n,
            parsed.n + 1,
            parsed.dicke.len()
        )));
    }
    Ok(SymmetricState::from_dicke(parsed.dicke.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())?)
}

pub fn constellation_file(path: &Path) -> Result<Constellation, CliError> {
    let parsed: ConstellationJson = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Usage(format!("{}: not a constellation JSON document: {e}", path.display())))?;
    if parsed.stars.len() != parsed.n {
        return Err(CliError::Usage(format!(
            "{}: n = {} but {} stars listed",
            path.display(),
            parsed.n,
            parsed.stars.len()
        )));
    }
    Ok(Constellation::new(parsed.stars.iter().map(|s| Star::from_angles(s.theta, s.phi)).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(angle("0.5").unwrap(), 0.5);
        assert_eq!(angle("pi").unwrap(), PI);
        assert_eq!(angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(angle("2pi/3").unwrap(), 2.0 * PI / 3.0);
        assert_eq!(angle("0.25*pi").unwrap(), 0.25 * PI);
        assert!(angle("pie").is_err());
        assert!(angle("2pi/0").is_err());
    }

    #[test]
    fn beta_ranges() {
        assert_eq!(betas("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(betas("0,pi").unwrap(), vec![0.0, PI]);
        assert!(betas("0:1:1").is_err());
    }

    #[test]
    fn specs_split_by_arity() {
        let tokens: Vec<String> = ["ghz", "3", "tetra", "coherent", "2", "pi/2", "0", "01"].map(String::from).to_vec();
        let specs = split_specs(&tokens).unwrap();
        assert_eq!(specs.len(), 4);
        assert_eq!(specs[2], ["coherent", "2", "pi/2", "0"]);
        assert!(split_specs(&["dicke".to_string(), "4".to_string()]).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(grid("64x128").unwrap(), (64, 128));
        assert!(grid("1x5").is_err());
        assert!(grid("64").is_err());
    }
}
