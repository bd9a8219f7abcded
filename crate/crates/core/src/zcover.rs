//! Z-covers given by classes w, lifting verdicts and first-kind certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::automorph::{restrict, AffineAuto};
use crate::cylinders::{core_span, decompose, multi_twist, Direction, MultiTwist, TwistSign};
use crate::exactnum::Vec2K;
use crate::homology::HomologyModel;
use crate::lattice::{intersect, vec_neg, IntMatrix};
use crate::surface::{LatticeFlag, TranslationSurface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZCoverError {
    #[error("the zero class does not define a cover")]
    ZeroClass,
    #[error("class has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank identity violated: rk W − rk(W ∩ ker φ) = {lhs} but rk⟨γ⟩ − [k:Q] = {rhs}")]
    IdentityViolated { lhs: i64, rhs: i64 },
}

/// Primitive representative with first nonzero coordinate positive.
pub fn canonical_vector(w: &[BigInt]) -> Result<Vec<BigInt>, ZCoverError> {
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(ZCoverError::ZeroClass);
    }
    let first_neg = w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    Ok(w.iter().map(|x| if first_neg { -(x / &g) } else { x / &g }).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZCoverClass {
    #[serde(serialize_with = "ser_bigvec")]
    pub w: Vec<BigInt>,
    #[serde(serialize_with = "ser_vec2")]
    pub hol_w: Vec2K,
    pub recurrent: bool,
    pub in_w: bool,
}

pub(crate) fn ser_bigvec<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| match x.to_i64() {
        Some(n) => serde_json::Value::from(n),
        None => serde_json::Value::from(x.to_string()),
    }))
}

fn ser_vec2<S: serde::Serializer>(v: &Vec2K, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq([v.x.to_string(), v.y.to_string()])
}

pub fn canonicalize(h: &HomologyModel, w: &[BigInt]) -> Result<ZCoverClass, ZCoverError> {
    if w.len() != h.rank {
        return Err(ZCoverError::DimensionMismatch { expected: h.rank, got: w.len() });
    }
    let w = canonical_vector(w)?;
    let hol_w = h.holonomy(&w).expect("dimension checked");
    let recurrent = hol_w.is_zero();
    Ok(ZCoverClass { in_w: recurrent, w, hol_w, recurrent })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lift {
    LiftsPlus,
    LiftsMinus,
    NoLift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftVerdict {
    pub auto: String,
    pub verdict: Lift,
    /// For multi-twists: whether φ(w) = 0.
    pub phi_w_zero: Option<bool>,
}

fn lift_of(action: &IntMatrix, w: &[BigInt]) -> Lift {
    let img = action.mul_vec(w);
    if img == w {
        Lift::LiftsPlus
    } else if img == vec_neg(w) {
        Lift::LiftsMinus
    } else {
        Lift::NoLift
    }
}

pub fn check_lift(f: &AffineAuto, label: &str, c: &ZCoverClass) -> LiftVerdict {
    LiftVerdict { auto: label.to_string(), verdict: lift_of(&f.action_rel, &c.w), phi_w_zero: None }
}

pub fn check_twist_lift(t: &MultiTwist, label: &str, c: &ZCoverClass) -> LiftVerdict {
    let phi_w = t.phi().mul_vec(&c.w);
    LiftVerdict {
        auto: label.to_string(),
        verdict: lift_of(&t.action_matrix, &c.w),
        phi_w_zero: Some(phi_w.iter().all(|x| x.is_zero())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankIdentityReport {
    pub rk_w: usize,
    pub rk_w_cap_ker_phi: usize,
    pub rk_core_span: usize,
    pub k_degree: usize,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    /// ψ(f) = I computed directly.
    pub acts_trivially: bool,
    /// rk⟨γ_j⟩ = [k:Q].
    pub triviality_criterion: bool,
}

/// rk W − rk(W ∩ ker φ) = rk⟨γ_j⟩ − [k:Q], both sides computed independently.
pub fn multitwist_rank_identity(h: &HomologyModel, t: &MultiTwist) -> Result<RankIdentityReport, ZCoverError> {
    let phi = t.phi();
    let ker_phi = crate::lattice::kernel(&phi);
    let cap = intersect(&h.w, &ker_phi).expect("same ambient");
    let span = core_span(h, &t.decomposition.cylinders);
    let lhs = h.w.rank() as i64 - cap.rank() as i64;
    let rhs = span.rank() as i64 - h.holonomy_degree as i64;
    let acts_trivially = h.w.basis_vectors().iter().all(|w| phi.mul_vec(w).iter().all(|x| x.is_zero()));
    let report = RankIdentityReport {
        rk_w: h.w.rank(),
        rk_w_cap_ker_phi: cap.rank(),
        rk_core_span: span.rank(),
        k_degree: h.holonomy_degree,
        lhs,
        rhs,
        holds: lhs == rhs,
        acts_trivially,
        triviality_criterion: span.rank() == h.holonomy_degree,
    };
    if !report.holds {
        return Err(ZCoverError::IdentityViolated { lhs, rhs });
    }
    Ok(report)
}

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    FirstKind_via_kernel,
    FirstKind_dimension2,
    InfiniteIndex,
    NonRecurrentElementary,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Verified,
    AssertedMetadata,
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub statement: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistEvidence {
    pub direction: String,
    pub derivative: String,
    pub cylinders: usize,
    pub psi_trivial: bool,
    pub fixes_w: bool,
    pub lift: Lift,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenCheck {
    pub auto: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// The strongest conclusion reached.
    pub kind: CertificateKind,
    /// Every rule that fired, in order.
    pub kinds: Vec<CertificateKind>,
    pub class: ZCoverClass,
    pub rk_w: usize,
    pub rk_w0: usize,
    pub k_degree: usize,
    pub hypotheses: Vec<Hypothesis>,
    pub twists: Vec<TwistEvidence>,
    pub lifting_autos: Vec<LiftVerdict>,
    pub eigen_checks: Vec<EigenCheck>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn has(&self, k: CertificateKind) -> bool {
        self.kinds.contains(&k)
    }
}

/// Multi-twists (right-handed) in every direction of the list that is
/// certified periodic with commensurable moduli.
pub fn twists_in(
    s: &TranslationSurface,
    h: &HomologyModel,
    directions: &[Direction],
    cap: usize,
) -> Vec<MultiTwist> {
    use rayon::prelude::*;
    directions
        .par_iter()
        .filter_map(|d| {
            let dec = decompose(s, h, d, cap).ok()?;
            multi_twist(h, &dec, TwistSign::Right).ok()
        })
        .collect()
}

/// Decision procedure for the cover of class c; the multi-twists are
/// supplied (see `twists_in`) together with any other known automorphisms.
pub fn certify(
    s: &TranslationSurface,
    h: &HomologyModel,
    c: &ZCoverClass,
    autos: &[(String, AffineAuto)],
    twists: &[MultiTwist],
) -> Certificate {
    let mut kinds = Vec::new();
    let mut hypotheses = Vec::new();
    let mut notes = Vec::new();
    let mut evidence = Vec::new();
    for t in twists {
        let psi_trivial = restrict(h, &AffineAuto::from_multi_twist(t, s.num_marked()))
            .map(|r| r.psi.is_identity())
            .unwrap_or(false);
        let lift = lift_of(&t.action_matrix, &c.w);
        evidence.push(TwistEvidence {
            direction: t.decomposition.direction.vector().to_string(),
            derivative: t.derivative.to_string(),
            cylinders: t.decomposition.cylinders.len(),
            psi_trivial,
            fixes_w: lift == Lift::LiftsPlus,
            lift,
        });
    }

    // (a) two parabolics with distinct fixed directions
    let non_elementary = twists.iter().enumerate().any(|(i, a)| {
        twists[i + 1..].iter().any(|b| {
            !a.decomposition.direction.vector().cross(b.decomposition.direction.vector()).is_zero()
        })
    });
    hypotheses.push(Hypothesis {
        statement: "Veech group is non-elementary (two parabolics with distinct fixed directions)".into(),
        provenance: if non_elementary { Provenance::Verified } else { Provenance::Unverified },
    });

    if c.recurrent {
        // (b) a multi-twist in ker ψ with nontrivial derivative
        let kernel_twist = evidence.iter().zip(twists).find(|(e, t)| e.psi_trivial && !t.derivative.is_identity());
        if let (true, Some((e, _))) = (non_elementary, kernel_twist) {
            kinds.push(CertificateKind::FirstKind_via_kernel);
            hypotheses.push(Hypothesis {
                statement: format!("multi-twist in direction {} lies in ker ψ with D ≠ I", e.direction),
                provenance: Provenance::Verified,
            });
            // the limit-set equality only yields "first kind" over a lattice
            hypotheses.push(Hypothesis {
                statement: "Veech group is a lattice, so its limit set is the whole circle".into(),
                provenance: match s.metadata().veech_group_is_lattice {
                    LatticeFlag::True => Provenance::AssertedMetadata,
                    _ => Provenance::Unverified,
                },
            });
        }
        // (c) small W0 on a lattice surface
        if h.w0.rank() <= 2 {
            match s.metadata().veech_group_is_lattice {
                LatticeFlag::True => {
                    kinds.push(CertificateKind::FirstKind_dimension2);
                    hypotheses.push(Hypothesis {
                        statement: format!("rk W0 = {} ≤ 2", h.w0.rank()),
                        provenance: Provenance::Verified,
                    });
                    hypotheses.push(Hypothesis {
                        statement: "Veech group is a lattice".into(),
                        provenance: Provenance::AssertedMetadata,
                    });
                }
                _ => notes.push("rk W0 ≤ 2 but the lattice property is not asserted in the metadata".into()),
            }
        }
        // (d) a multi-twist that moves w
        if let Some(e) = evidence.iter().find(|e| !e.fixes_w) {
            kinds.push(CertificateKind::InfiniteIndex);
            hypotheses.push(Hypothesis {
                statement: format!("multi-twist in direction {} moves w", e.direction),
                provenance: Provenance::Verified,
            });
        }
    }

    // (e) non-recurrent covers: lifting automorphisms have hol(w) as eigenvector
    let mut lifting = Vec::new();
    let mut eigen_checks = Vec::new();
    for (t, e) in twists.iter().zip(&evidence) {
        if e.lift != Lift::NoLift {
            lifting.push(check_twist_lift(t, &format!("twist {}", e.direction), c));
        }
    }
    for (label, f) in autos {
        let v = check_lift(f, label, c);
        if v.verdict != Lift::NoLift {
            lifting.push(v);
        }
    }
    if !c.recurrent {
        kinds.push(CertificateKind::NonRecurrentElementary);
        for (t, e) in twists.iter().zip(&evidence) {
            if e.lift != Lift::NoLift {
                eigen_checks.push(EigenCheck {
                    auto: format!("twist {}", e.direction),
                    holds: is_eigen(&t.derivative.apply(&c.hol_w), &c.hol_w),
                });
            }
        }
        for (label, f) in autos {
            if lift_of(&f.action_rel, &c.w) != Lift::NoLift {
                eigen_checks.push(EigenCheck {
                    auto: label.clone(),
                    holds: is_eigen(&f.derivative.apply(&c.hol_w), &c.hol_w),
                });
            }
        }
        hypotheses.push(Hypothesis {
            statement: "hol(w) ≠ 0, so the cover is not recurrent".into(),
            provenance: Provenance::Verified,
        });
    }

    let kind = kinds.first().copied().unwrap_or(CertificateKind::None);
    if kinds.is_empty() {
        kinds.push(CertificateKind::None);
    }
    Certificate {
        kind,
        kinds,
        class: c.clone(),
        rk_w: h.w.rank(),
        rk_w0: h.w0.rank(),
        k_degree: h.holonomy_degree,
        hypotheses,
        twists: evidence,
        lifting_autos: lifting,
        eigen_checks,
        notes,
    }
}

fn is_eigen(image: &Vec2K, v: &Vec2K) -> bool {
    *image == *v || *image == -v.clone()
}
