use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::wavefunction::{gaussian_packet, position_bump_1d, velocity_bump, SpinWavefunction};
use crate::error::{Error, Result};
use crate::kinematics::Spin;

/// JSON description of a canonical test state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Gaussian {
        center: [f64; 3],
        width: f64,
        /// `[re, im]` per spin component, `j₃ = +j` first. Defaults to all
        /// weight in `j₃ = +j`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spin_weights: Option<Vec<[f64; 2]>>,
    },
    VelocityBump {
        center: [f64; 3],
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spin_weights: Option<Vec<[f64; 2]>>,
    },
    /// Spin-0 state localized in 1-D position space; needs the reduced grid.
    PositionBump { center: f64, half_width: f64 },
}

fn weights_for(spin: Spin, w: &Option<Vec<[f64; 2]>>) -> Vec<Complex64> {
    match w {
        Some(w) => w.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        None => {
            let mut v = vec![Complex64::new(0.0, 0.0); spin.dim()];
            v[0] = Complex64::new(1.0, 0.0);
            v
        }
    }
}

impl StateSpec {
    /// Builds the wavefunction; `mass` sets the length scale of position profiles.
    pub fn build(&self, spin: Spin, mass: f64) -> Result<SpinWavefunction> {
        match self {
            StateSpec::Gaussian { center, width, spin_weights } => gaussian_packet(
                Vector3::from(*center),
                *width,
                spin,
                &weights_for(spin, spin_weights),
            ),
            StateSpec::VelocityBump { center, radius, spin_weights } => velocity_bump(
                Vector3::from(*center),
                *radius,
                spin,
                &weights_for(spin, spin_weights),
            ),
            StateSpec::PositionBump { center, half_width } => {
                if spin != Spin::ZERO {
                    return Err(Error::param("spin", "position_bump requires j = 0"));
                }
                position_bump_1d(*center, *half_width, mass)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s = StateSpec::Gaussian {
            center: [0.0, 0.0, 1.0],
            width: 0.5,
            spin_weights: Some(vec![[1.0, 0.0], [0.0, -1.0]]),
        };
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<StateSpec>(&text).unwrap(), s);
        let f = s.build(Spin::HALF, 1.0).unwrap();
        assert_eq!(f.eval(&Vector3::new(0.0, 0.0, 1.0), 1), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"family":"gaussian","center":[0,0,0],"width":1,"widht":2}"#;
        assert!(serde_json::from_str::<StateSpec>(text).is_err());
    }
}
