//! Parametric maxflow, ρ-fans, their decision regions and the quantities
//! entering separation certificates.

pub mod geometry;
pub mod network;
pub mod profile;
pub mod volatility;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use geometry::{
    collins_systems, cone_polynomials, dividing_planes, lift, lift_modulus, pdec_member, pdec_member_i64, project,
    sample_points, separates, silhouette, spacing_check, CollinsKind, CollinsSystem, CompactK, SamplePoint,
    Separation, SpacingReport, Surface,
};
pub use network::{
    cut_value, maxflow, maxflow_with, min_cut_exhaustive, random_network, Affine, Dinic, EdmondsKarp, FlowResult,
    MaxflowSolver, NetEdge, ParamNetwork,
};
pub use profile::{affine_fan, make_fan, parametric_profile, parametric_profile_with, Convexity, Profile, RhoFan};
pub use volatility::{brute_force_volatility, sampled_extrema, volatility};

use crate::benor::MateCertificate;
use crate::error::{Error, Result};

/// Stated sizes `(2p)^(4k)`, `2^(4k)` and `2^(k+1) p^k`, with measured
/// counts when a certificate from an actual extraction is supplied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateQuantities {
    pub processors: u32,
    pub steps: u32,
    pub equations: String,
    pub degree: String,
    pub rho_threshold: String,
    pub measured: Option<MateCertificate>,
    pub holds: bool,
}

pub fn certificate_quantities(p: u32, k: u32, measured: Option<MateCertificate>) -> Result<CertificateQuantities> {
    if p < 1 || k < 1 {
        return Err(Error::invalid("processors and steps must be at least 1"));
    }
    let equations = BigUint::from(2 * p).pow(4 * k);
    let degree = BigUint::from(2u32).pow(4 * k);
    let rho = BigUint::from(2u32).pow(k + 1) * BigUint::from(p).pow(k);
    let holds = measured.as_ref().is_none_or(|m| {
        BigUint::from(m.max_equations) <= equations && BigUint::from(m.max_degree) <= degree
    });
    Ok(CertificateQuantities {
        processors: p,
        steps: k,
        equations: equations.to_string(),
        degree: degree.to_string(),
        rho_threshold: rho.to_string(),
        measured,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benor::{mate_certificate, real_mate};
    use crate::machines::{compile_pram, parse_pram};

    #[test]
    fn stated_quantities() {
        let q = certificate_quantities(1, 1, None).unwrap();
        assert_eq!((q.equations.as_str(), q.degree.as_str(), q.rho_threshold.as_str()), ("16", "16", "4"));
        let q = certificate_quantities(2, 1, None).unwrap();
        assert_eq!((q.equations.as_str(), q.degree.as_str(), q.rho_threshold.as_str()), ("256", "16", "8"));
        assert!(certificate_quantities(0, 1, None).is_err());
    }

    #[test]
    fn measured_two_processor_program() {
        let prog = parse_pram("1: Y1 := X1 * X1\n2: X3 := Y1 + X2\n3: X3 := X3 * X3\n---\n1: Y1 := X2 * X2\n2: X4 := Y1 - X1\n3: X4 := X4 * X4").unwrap();
        let g = compile_pram(&prog).unwrap();
        let q = real_mate(&g).unwrap();
        let m = mate_certificate(&g, &q, 2, 3).unwrap();
        let c = certificate_quantities(2, 3, Some(m)).unwrap();
        assert!(c.holds);
    }
}
