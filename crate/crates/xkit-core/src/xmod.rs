//! Crossed modules over finite groups: a boundary `μ: M → P` with a right
//! `P`-action on `M`, validated exhaustively against the two axioms
//!
//! ```text
//! CM1:  μ(m^p) = p⁻¹·(μm)·p
//! CM2:  n⁻¹·m·n = m^(μn)
//! ```
//!
//! plus the action laws, along with the four standard constructions and the
//! derived facts Im μ ⊴ P, Ker μ ⊆ Z(M), Ker μ fixed by Im μ.

use crate::error::XmodError;
use crate::table::FiniteGroupTable;

/// A crossed module on finite carriers. `act[m][p]` is `m^p`.
#[derive(Clone, Debug)]
pub struct CrossedModule {
    pub m: FiniteGroupTable,
    pub p: FiniteGroupTable,
    pub mu: Vec<usize>,
    pub act: Vec<Vec<usize>>,
}

/// Exhaustive validation report with explicit counterexamples.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    /// (m, p) with μ(m^p) ≠ p⁻¹(μm)p
    pub cm1_violations: Vec<(usize, usize)>,
    /// (m, n) with n⁻¹mn ≠ m^(μn)
    pub cm2_violations: Vec<(usize, usize)>,
    /// textual descriptions of failed action laws
    pub action_violations: Vec<String>,
    /// m-pairs where μ is not a homomorphism
    pub mu_violations: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn cm1_ok(&self) -> bool {
        self.cm1_violations.is_empty()
    }

    pub fn cm2_ok(&self) -> bool {
        self.cm2_violations.is_empty()
    }

    pub fn action_ok(&self) -> bool {
        self.action_violations.is_empty()
    }

    pub fn mu_ok(&self) -> bool {
        self.mu_violations.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.cm1_ok() && self.cm2_ok() && self.action_ok() && self.mu_ok()
    }
}

/// The derived facts that hold in every valid crossed module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Consequences {
    pub im_normal: bool,
    pub ker_central: bool,
    pub ker_fixed_by_im: bool,
}

impl CrossedModule {
    /// Basic shape checks (sizes and ranges).
    pub fn check_shape(&self) -> Result<(), XmodError> {
        let nm = self.m.order();
        let np = self.p.order();
        if self.mu.len() != nm {
            return Err(XmodError::PreconditionFailed("mu size mismatch".into()));
        }
        if self.mu.iter().any(|&x| x >= np) {
            return Err(XmodError::PreconditionFailed("mu image out of range".into()));
        }
        if self.act.len() != nm || self.act.iter().any(|row| row.len() != np) {
            return Err(XmodError::PreconditionFailed("action table size mismatch".into()));
        }
        if self.act.iter().flatten().any(|&x| x >= nm) {
            return Err(XmodError::PreconditionFailed("action value out of range".into()));
        }
        Ok(())
    }

    pub fn action(&self, m: usize, p: usize) -> usize {
        self.act[m][p]
    }

    /// Exhaustive check of CM1, CM2, the right-action laws, and that μ is a
    /// homomorphism. Counterexamples are collected, not asserted.
    pub fn validate(&self) -> Result<ValidationReport, XmodError> {
        self.check_shape()?;
        let mut report = ValidationReport::default();
        let nm = self.m.order();
        let np = self.p.order();
        for a in 0..nm {
            for b in 0..nm {
                if self.mu[self.m.mul(a, b)] != self.p.mul(self.mu[a], self.mu[b]) {
                    report.mu_violations.push((a, b));
                }
            }
        }
        // right action: m^1 = m, m^(pq) = (m^p)^q, each (·)^p an automorphism
        for m in 0..nm {
            if self.action(m, self.p.id()) != m {
                report.action_violations.push(format!("{m}^1 != {m}"));
            }
        }
        for m in 0..nm {
            for p in 0..np {
                for q in 0..np {
                    if self.action(m, self.p.mul(p, q)) != self.action(self.action(m, p), q) {
                        report
                            .action_violations
                            .push(format!("{m}^(p{p}*p{q}) != ({m}^p{p})^p{q}"));
                    }
                }
            }
        }
        for p in 0..np {
            let mut seen = vec![false; nm];
            for m in 0..nm {
                let mp = self.action(m, p);
                if seen[mp] {
                    report.action_violations.push(format!("(·)^p{p} not bijective"));
                    break;
                }
                seen[mp] = true;
            }
            for a in 0..nm {
                for b in 0..nm {
                    if self.action(self.m.mul(a, b), p)
                        != self.m.mul(self.action(a, p), self.action(b, p))
                    {
                        report
                            .action_violations
                            .push(format!("(m{a}*m{b})^p{p} is not m{a}^p{p}*m{b}^p{p}"));
                    }
                }
            }
        }
        for m in 0..nm {
            for p in 0..np {
                if self.mu[self.action(m, p)] != self.p.conj(self.mu[m], p) {
                    report.cm1_violations.push((m, p));
                }
            }
        }
        for m in 0..nm {
            for n in 0..nm {
                if self.m.conj(m, n) != self.action(m, self.mu[n]) {
                    report.cm2_violations.push((m, n));
                }
            }
        }
        Ok(report)
    }

    /// Im μ as a sorted element list.
    pub fn image(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.mu.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Ker μ as a sorted element list.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.m.order()).filter(|&m| self.mu[m] == self.p.id()).collect()
    }

    /// Empirically tests the two axiom consequences: Im μ normal in `P`,
    /// Ker μ central in `M` and fixed pointwise by Im μ. For a valid
    /// crossed module all three are forced; this measures, it does not
    /// assume.
    pub fn consequences(&self) -> Consequences {
        let im = self.image();
        let ker = self.kernel();
        let im_normal = self.p.is_normal_subgroup(&im);
        let ker_central = ker
            .iter()
            .all(|&k| (0..self.m.order()).all(|a| self.m.mul(k, a) == self.m.mul(a, k)));
        let ker_fixed_by_im = ker
            .iter()
            .all(|&k| im.iter().all(|&p| self.action(k, p) == k));
        Consequences { im_normal, ker_central, ker_fixed_by_im }
    }
}

/// Data for the four standard constructions.
#[derive(Clone, Debug)]
pub enum StandardData {
    /// A normal subgroup `N ⊴ G` with conjugation action; `subgroup` lists
    /// ambient element indices.
    NormalInclusion { group: FiniteGroupTable, subgroup: Vec<usize> },
    /// `χ: M → Aut M`, `m ↦ (n ↦ m⁻¹nm)`.
    InnerAutomorphism { group: FiniteGroupTable },
    /// The zero map `M → P` for an abelian `M` with a `P`-action.
    ZeroModule { p: FiniteGroupTable, m: FiniteGroupTable, act: Vec<Vec<usize>> },
    /// An epimorphism `μ: M → P` with `Ker μ ⊆ Z(M)`; the action is by
    /// conjugation through any set-section of μ.
    CentralEpi { m: FiniteGroupTable, p: FiniteGroupTable, mu: Vec<usize> },
}

/// Builds one of the standard crossed modules, checking the hypothesis the
/// construction needs (normality, module axioms, surjectivity+centrality).
pub fn make_standard(data: StandardData) -> Result<CrossedModule, XmodError> {
    let xm = match data {
        StandardData::NormalInclusion { group, subgroup } => {
            if !group.is_subgroup(&subgroup) {
                return Err(XmodError::PreconditionFailed("not a subgroup".into()));
            }
            if !group.is_normal_subgroup(&subgroup) {
                return Err(XmodError::PreconditionFailed("subgroup not normal".into()));
            }
            let (m, incl) = group.subgroup_table(&subgroup)?;
            let back: std::collections::BTreeMap<usize, usize> =
                incl.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let mu: Vec<usize> = incl.clone();
            let act: Vec<Vec<usize>> = (0..m.order())
                .map(|mi| {
                    (0..group.order())
                        .map(|p| back[&group.conj(incl[mi], p)])
                        .collect()
                })
                .collect();
            CrossedModule { m, p: group, mu, act }
        }
        StandardData::InnerAutomorphism { group } => {
            let autos = group.automorphisms();
            // identity automorphism must be index 0
            let mut autos = autos;
            let id_pos = autos
                .iter()
                .position(|a| a.iter().enumerate().all(|(i, &x)| i == x))
                .expect("identity automorphism exists");
            autos.swap(0, id_pos);
            let k = autos.len();
            let key: std::collections::BTreeMap<Vec<usize>, usize> =
                autos.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
            // composition convention: (α·β)(x) = β(α(x)), matching right
            // actions
            let mut mul = vec![0usize; k * k];
            for i in 0..k {
                for j in 0..k {
                    let comp: Vec<usize> = (0..group.order())
                        .map(|x| autos[j][autos[i][x]])
                        .collect();
                    mul[i * k + j] = key[&comp];
                }
            }
            let p = FiniteGroupTable::new(k, mul)?;
            // χ(m): n ↦ m⁻¹nm
            let mu: Vec<usize> = (0..group.order())
                .map(|m| {
                    let chi: Vec<usize> =
                        (0..group.order()).map(|n| group.conj(n, m)).collect();
                    key[&chi]
                })
                .collect();
            let act: Vec<Vec<usize>> = (0..group.order())
                .map(|m| (0..k).map(|phi| autos[phi][m]).collect())
                .collect();
            CrossedModule { m: group, p, mu, act }
        }
        StandardData::ZeroModule { p, m, act } => {
            if !m.is_abelian() {
                return Err(XmodError::PreconditionFailed("module carrier not abelian".into()));
            }
            let mu = vec![p.id(); m.order()];
            let xm = CrossedModule { m, p, mu, act };
            // the module axioms are exactly the action laws, checked below
            xm
        }
        StandardData::CentralEpi { m, p, mu } => {
            if mu.len() != m.order() {
                return Err(XmodError::PreconditionFailed("mu size mismatch".into()));
            }
            let mut hit = vec![false; p.order()];
            for a in 0..m.order() {
                for b in 0..m.order() {
                    if mu[m.mul(a, b)] != p.mul(mu[a], mu[b]) {
                        return Err(XmodError::PreconditionFailed(
                            "mu is not a homomorphism".into(),
                        ));
                    }
                }
                hit[mu[a]] = true;
            }
            if hit.iter().any(|&h| !h) {
                return Err(XmodError::PreconditionFailed("mu is not surjective".into()));
            }
            let center = m.center();
            for k in 0..m.order() {
                if mu[k] == p.id() && !center.contains(&k) {
                    return Err(XmodError::PreconditionFailed(
                        "kernel not contained in the centre".into(),
                    ));
                }
            }
            // a set-section of μ; centrality of the kernel makes the induced
            // conjugation action independent of the choice
            let mut section = vec![usize::MAX; p.order()];
            for a in 0..m.order() {
                if section[mu[a]] == usize::MAX {
                    section[mu[a]] = a;
                }
            }
            let act: Vec<Vec<usize>> = (0..m.order())
                .map(|a| (0..p.order()).map(|q| m.conj(a, section[q])).collect())
                .collect();
            CrossedModule { m, p, mu, act }
        }
    };
    let report = xm.validate()?;
    if !report.is_valid() {
        return Err(XmodError::PreconditionFailed(format!(
            "construction failed validation: cm1={} cm2={} action={} mu={}",
            report.cm1_ok(),
            report.cm2_ok(),
            report.action_ok(),
            report.mu_ok()
        )));
    }
    Ok(xm)
}

/// The identity crossed module `G → G` with conjugation action.
pub fn identity_xmod(g: &FiniteGroupTable) -> CrossedModule {
    let all: Vec<usize> = (0..g.order()).collect();
    make_standard(StandardData::NormalInclusion { group: g.clone(), subgroup: all })
        .expect("identity inclusion is a crossed module")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{enumerate_fp_group, GroupPresentation};
    use crate::word::FreeWord;

    pub(crate) fn s3() -> FiniteGroupTable {
        let x = FreeWord::generator(0);
        let y = FreeWord::generator(1);
        let p = GroupPresentation::unnamed(2, vec![x.pow(2), y.pow(3), x.mul(&y).pow(2)]);
        enumerate_fp_group(&p, 64).unwrap().table
    }

    fn a3_in_s3() -> (FiniteGroupTable, Vec<usize>) {
        let g = s3();
        let elts: Vec<usize> = (0..6).filter(|&e| g.element_order(e) != 2).collect();
        assert_eq!(elts.len(), 3);
        (g, elts)
    }

    #[test]
    fn a3_inclusion_is_valid() {
        let (g, a3) = a3_in_s3();
        let xm = make_standard(StandardData::NormalInclusion { group: g, subgroup: a3 }).unwrap();
        let report = xm.validate().unwrap();
        assert!(report.is_valid());
        let c = xm.consequences();
        assert!(c.im_normal && c.ker_central && c.ker_fixed_by_im);
    }

    #[test]
    fn identity_inclusion_is_valid() {
        let xm = identity_xmod(&FiniteGroupTable::cyclic(4));
        assert!(xm.validate().unwrap().is_valid());
    }

    #[test]
    fn non_normal_subgroup_rejected() {
        let g = s3();
        // a subgroup of order 2 in S3 is not normal
        let two = (1..6).find(|&e| g.element_order(e) == 2).unwrap();
        let sub = vec![0, two];
        assert!(matches!(
            make_standard(StandardData::NormalInclusion { group: g, subgroup: sub }),
            Err(XmodError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn inner_automorphism_of_s3() {
        let xm = make_standard(StandardData::InnerAutomorphism { group: s3() }).unwrap();
        // Aut(S3) ≅ S3
        assert_eq!(xm.p.order(), 6);
        assert!(xm.p.isomorphic(&s3()));
        assert!(xm.validate().unwrap().is_valid());
        // χ injective here (centre trivial)
        let mut mu = xm.mu.clone();
        mu.sort_unstable();
        mu.dedup();
        assert_eq!(mu.len(), 6);
    }

    #[test]
    fn inner_automorphism_of_c4() {
        let xm = make_standard(StandardData::InnerAutomorphism {
            group: FiniteGroupTable::cyclic(4),
        })
        .unwrap();
        assert_eq!(xm.p.order(), 2); // Aut C4 = C2
        assert!(xm.validate().unwrap().is_valid());
        // abelian: χ is the zero map, kernel is everything
        assert_eq!(xm.kernel().len(), 4);
    }

    #[test]
    fn zero_module_with_trivial_action() {
        let p = FiniteGroupTable::cyclic(2);
        let m = FiniteGroupTable::cyclic(3);
        let act: Vec<Vec<usize>> = (0..3).map(|mi| vec![mi; 2]).collect();
        let xm = make_standard(StandardData::ZeroModule { p, m, act }).unwrap();
        assert!(xm.validate().unwrap().is_valid());
        let c = xm.consequences();
        assert!(c.im_normal && c.ker_central && c.ker_fixed_by_im);
    }

    #[test]
    fn zero_module_with_inversion_action() {
        // C2 acting on C3 by inversion
        let p = FiniteGroupTable::cyclic(2);
        let m = FiniteGroupTable::cyclic(3);
        let act: Vec<Vec<usize>> = (0..3).map(|mi| vec![mi, m.inv(mi)]).collect();
        let xm = make_standard(StandardData::ZeroModule { p, m, act }).unwrap();
        assert!(xm.validate().unwrap().is_valid());
    }

    #[test]
    fn zero_module_rejects_nonabelian() {
        let m = s3();
        let act: Vec<Vec<usize>> = (0..6).map(|mi| vec![mi]).collect();
        assert!(make_standard(StandardData::ZeroModule {
            p: FiniteGroupTable::cyclic(1),
            m,
            act
        })
        .is_err());
    }

    #[test]
    fn central_epi_c4_to_c2() {
        let m = FiniteGroupTable::cyclic(4);
        let p = FiniteGroupTable::cyclic(2);
        let mu: Vec<usize> = (0..4).map(|x| x % 2).collect();
        let xm = make_standard(StandardData::CentralEpi { m, p, mu }).unwrap();
        assert!(xm.validate().unwrap().is_valid());
        assert_eq!(xm.kernel(), vec![0, 2]);
    }

    #[test]
    fn central_epi_rejects_noncentral_kernel() {
        // S3 -> C2 by sign: kernel A3 is not central in S3
        let m = s3();
        let p = FiniteGroupTable::cyclic(2);
        let mu: Vec<usize> = (0..6).map(|e| usize::from(m.element_order(e) == 2)).collect();
        assert!(matches!(
            make_standard(StandardData::CentralEpi { m, p, mu }),
            Err(XmodError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn broken_action_reports_cm1_counterexample() {
        // identity C2 -> C2 but with a deliberately wrong "action" that
        // swaps under the nontrivial element
        let c2 = FiniteGroupTable::cyclic(2);
        let xm = CrossedModule {
            m: c2.clone(),
            p: c2,
            mu: vec![0, 1],
            act: vec![vec![0, 1], vec![1, 0]],
        };
        let report = xm.validate().unwrap();
        assert!(!report.is_valid());
        assert!(!report.cm1_ok() || !report.cm2_ok() || !report.action_ok());
        assert!(!report.cm1_violations.is_empty());
    }
}
