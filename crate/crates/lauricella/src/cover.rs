//! Invariants of the cyclic cover w^m = prod (z_k - zeta)^{d_k}: holomorphic
//! eigenspace dimensions, genus bookkeeping, eigenspace signatures and the
//! arithmeticity decision.

use num::bigint::BigInt;
use num::traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rat_str, Rational};
use crate::weights::WeightSystem;

/// Numeric profile of the cover: order, ramification, eigenspace dimensions
/// and genus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverProfile {
    pub m: u64,
    /// ramification orders over z_0..z_{n+1}
    pub ramification: Vec<u64>,
    /// dim of the holomorphic chi^r eigenspace for r = 0..m-1
    pub eigendims: Vec<usize>,
    pub genus: usize,
}

fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// S_r = sum_{k=0}^{n} { r mu_k } (fractional parts; finite weights only).
pub fn fractional_sum(ws: &WeightSystem, r: i64) -> Rational {
    let r = Rational::from(BigInt::from(r));
    (0..=ws.n()).map(|k| frac(&(&r * ws.mu(k)))).sum()
}

/// dim of the holomorphic chi^r eigenspace: the largest integer smaller than
/// S_r (and 0 for r = 0).
pub fn eigenspace_dims(ws: &WeightSystem) -> Result<Vec<usize>> {
    ws.ensure_hyperbolic("eigenspace_dims")?;
    let m = ws.common_denominator_u64()?;
    let mut out = Vec::with_capacity(m as usize);
    out.push(0);
    for r in 1..m {
        let s = fractional_sum(ws, r as i64);
        let dim = if s.denom().is_one() {
            s.to_integer() - BigInt::one()
        } else {
            s.floor().to_integer()
        };
        let dim = dim.to_i64().unwrap_or(-1);
        if dim < 0 {
            return Err(Error::Invalid(format!(
                "eigenspace dimension formula produced {dim} at r = {r}"
            )));
        }
        out.push(dim as usize);
    }
    Ok(out)
}

/// Genus of the cover via the Euler characteristic:
/// 2 - 2g = -m n + sum_{k=0}^{n+1} m / m_k.
pub fn genus(ws: &WeightSystem) -> Result<usize> {
    ws.ensure_hyperbolic("genus")?;
    let m = ws.common_denominator_u64()? as i64;
    let n = ws.n() as i64;
    let mut chi = -m * n;
    for k in 0..=ws.n() + 1 {
        let mk = ws.denominator(k).to_i64().ok_or_else(|| {
            Error::Cap("ramification order too large".into())
        })?;
        chi += m / mk;
    }
    let two_g = 2 - chi;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(Error::Invalid(format!(
            "Euler characteristic {chi} does not give a nonnegative genus"
        )));
    }
    Ok((two_g / 2) as usize)
}

pub fn cover_profile(ws: &WeightSystem) -> Result<CoverProfile> {
    let m = ws.common_denominator_u64()?;
    let ramification = (0..=ws.n() + 1)
        .map(|k| ws.denominator(k).to_u64().unwrap())
        .collect();
    let eigendims = eigenspace_dims(ws)?;
    let genus = genus(ws)?;
    Ok(CoverProfile {
        m,
        ramification,
        eigendims,
        genus,
    })
}

/// Signature (p, q) of the chi^r eigenspace of H^1: p = eigendims[r],
/// q = eigendims[m - r].
pub fn eigenspace_signature(ws: &WeightSystem, r: u64) -> Result<(usize, usize)> {
    ws.ensure_hyperbolic("eigenspace_signature")?;
    let m = ws.common_denominator_u64()?;
    let r = r % m;
    if r == 0 {
        return Err(Error::Invalid("eigenspace_signature requires r != 0 mod m".into()));
    }
    let dims = eigenspace_dims(ws)?;
    Ok((dims[r as usize], dims[(m - r) as usize]))
}

/// A failing Galois direction r with both fractional-part sums.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ArithmeticityWitness {
    pub r: u64,
    pub s_r: String,
    pub s_neg_r: String,
}

/// Arithmeticity of the monodromy group: true iff every Galois-conjugate
/// eigenspace (r in (Z/m)^* minus {1, m-1}) carries a definite form.
pub fn is_arithmetic(ws: &WeightSystem) -> Result<(bool, Vec<ArithmeticityWitness>)> {
    ws.ensure_hyperbolic("is_arithmetic")?;
    let m = ws.common_denominator_u64()?;
    let dims = eigenspace_dims(ws)?;
    let mut witnesses = Vec::new();
    for r in 2..m.saturating_sub(1) {
        if num::integer::gcd(r, m) != 1 {
            continue;
        }
        let p = dims[r as usize];
        let q = dims[(m - r) as usize];
        if p > 0 && q > 0 {
            witnesses.push(ArithmeticityWitness {
                r,
                s_r: rat_str(&fractional_sum(ws, r as i64)),
                s_neg_r: rat_str(&fractional_sum(ws, (m - r) as i64)),
            });
        }
    }
    Ok((witnesses.is_empty(), witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn ws(nums: &[i64], den: i64) -> WeightSystem {
        WeightSystem::new(nums.iter().map(|&p| rat(p, den)).collect()).unwrap()
    }

    #[test]
    fn eigendims_3337() {
        let w = ws(&[3, 3, 3, 7], 12);
        let dims = eigenspace_dims(&w).unwrap();
        assert_eq!(dims, vec![0, 1, 1, 2, 0, 1, 1, 2, 0, 0, 2, 2]);
        // r = 1 gives 1, r = 11 gives n - 1 = 2
        assert_eq!(dims[1], 1);
        assert_eq!(dims[11], w.n() - 1);
    }

    #[test]
    fn genus_3337() {
        let w = ws(&[3, 3, 3, 7], 12);
        assert_eq!(genus(&w).unwrap(), 12);
        let dims = eigenspace_dims(&w).unwrap();
        assert_eq!(dims.iter().sum::<usize>(), 12);
    }

    #[test]
    fn genus_elliptic_curve_cover() {
        // mu = (1/2,1/2,1/2), mu_3 = 1/2: the classical double cover of four
        // points, genus 1
        let w = ws(&[1, 1, 1], 2);
        assert_eq!(genus(&w).unwrap(), 1);
        let dims = eigenspace_dims(&w).unwrap();
        assert_eq!(dims.iter().sum::<usize>(), 1);
    }

    #[test]
    fn eigenspace_signature_values() {
        let w = ws(&[3, 3, 3, 7], 12);
        assert_eq!(eigenspace_signature(&w, 1).unwrap(), (1, 2));
        assert_eq!(eigenspace_signature(&w, 5).unwrap(), (1, 2));
        assert_eq!(eigenspace_signature(&w, 4).unwrap(), (0, 0));
        assert!(eigenspace_signature(&w, 0).is_err());
        assert!(eigenspace_signature(&w, 12).is_err());
    }

    #[test]
    fn arithmeticity_3337() {
        let w = ws(&[3, 3, 3, 7], 12);
        let (arith, wit) = is_arithmetic(&w).unwrap();
        assert!(!arith);
        assert_eq!(
            wit,
            vec![
                ArithmeticityWitness {
                    r: 5,
                    s_r: "5/3".into(),
                    s_neg_r: "7/3".into()
                },
                ArithmeticityWitness {
                    r: 7,
                    s_r: "7/3".into(),
                    s_neg_r: "5/3".into()
                },
            ]
        );
    }

    #[test]
    fn arithmeticity_trivial_domain() {
        // m = 6: (Z/6)^* = {1,5} = {+-1}: empty quantifier, arithmetic
        let w = WeightSystem::new(vec![rat(1, 6); 7]).unwrap();
        let (arith, wit) = is_arithmetic(&w).unwrap();
        assert!(arith);
        assert!(wit.is_empty());
    }

    #[test]
    fn arithmeticity_2222_over_5() {
        let w = ws(&[2, 2, 2, 2], 5);
        let (arith, wit) = is_arithmetic(&w).unwrap();
        assert!(arith, "witnesses: {wit:?}");
    }

    #[test]
    fn witness_sums_pair_up() {
        // S_r + S_{-r} = n + 1 for r coprime to m (no fractional part vanishes)
        let w = ws(&[3, 3, 3, 7], 12);
        for r in [1i64, 5, 7, 11] {
            let s = fractional_sum(&w, r) + fractional_sum(&w, 12 - r);
            assert!(s.denom().is_one());
            assert_eq!(s, rat(4, 1));
        }
    }

    #[test]
    fn requires_hyperbolic() {
        let w = WeightSystem::new(vec![rat(1, 6); 5]).unwrap();
        assert!(eigenspace_dims(&w).is_err());
        assert!(genus(&w).is_err());
        assert!(is_arithmetic(&w).is_err());
    }
}
