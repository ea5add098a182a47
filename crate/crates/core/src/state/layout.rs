//! Component layouts of the built-in systems.
//!
//! The orderings below are this crate's stable storage contract. For FO-CCZ4 the
//! blocks follow the conventional state-vector listing
//! `(alpha, beta^i, gtilde_ij, phi, K0, Atilde_ij, K, Theta, Ghat^i, b^i,
//!   A_k, psiA_k, phiA, B_k^i, psiB^i_k, phiB^i, D_kij, psiD_kij, phiD_ij,
//!   P_k, psiP_k, phiP)`,
//! with `alpha` and `phi` stored as logarithms.

use std::fmt;

use super::sym3::SYM_LABELS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    ToyHomogeneous,
    ToyNonhomogeneous,
    InductionGlm,
    Foccz4,
}

impl SystemKind {
    pub const ALL: [SystemKind; 4] = [
        SystemKind::ToyHomogeneous,
        SystemKind::ToyNonhomogeneous,
        SystemKind::InductionGlm,
        SystemKind::Foccz4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::ToyHomogeneous => "toy_homogeneous",
            SystemKind::ToyNonhomogeneous => "toy_nonhomogeneous",
            SystemKind::InductionGlm => "induction_glm",
            SystemKind::Foccz4 => "foccz4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn base_count(self) -> usize {
        match self {
            SystemKind::ToyHomogeneous => toy::HOMOGENEOUS_COUNT,
            SystemKind::ToyNonhomogeneous => toy::NONHOMOGENEOUS_COUNT,
            SystemKind::InductionGlm => induction::COUNT,
            SystemKind::Foccz4 => ccz4::COUNT,
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// FO-CCZ4 component offsets.
pub mod ccz4 {
    use crate::state::sym3::SYM;

    pub const LN_ALPHA: usize = 0;
    pub const BETA: usize = 1;
    pub const GAMMA: usize = 4;
    pub const LN_PHI: usize = 10;
    pub const K0: usize = 11;
    pub const ATILDE: usize = 12;
    pub const K: usize = 18;
    pub const THETA: usize = 19;
    pub const GHAT: usize = 20;
    pub const BVEC: usize = 23;
    pub const A: usize = 26;
    pub const PSI_A: usize = 29;
    pub const PHI_A: usize = 32;
    /// `B_k^i` at `B + 3k + i`.
    pub const B: usize = 33;
    /// `(psiB)^i_m` at `PSI_B + 3m + i`.
    pub const PSI_B: usize = 42;
    pub const PHI_B: usize = 51;
    /// `D_kij` at `D + 6k + SYM[i][j]`.
    pub const D: usize = 54;
    pub const PSI_D: usize = 72;
    pub const PHI_D: usize = 90;
    pub const P: usize = 96;
    pub const PSI_P: usize = 99;
    pub const PHI_P: usize = 102;
    pub const COUNT: usize = 103;
    /// Number of base (non-cleaning) variables.
    pub const BASE_COUNT: usize = 59;
    /// Slot of the advected energy density when the layout carries a tracer.
    pub const TAU: usize = 103;

    #[inline(always)]
    pub const fn b(k: usize, i: usize) -> usize {
        B + 3 * k + i
    }

    #[inline(always)]
    pub const fn psi_b(m: usize, i: usize) -> usize {
        PSI_B + 3 * m + i
    }

    #[inline(always)]
    pub const fn d(k: usize, i: usize, j: usize) -> usize {
        D + 6 * k + SYM[i][j]
    }

    #[inline(always)]
    pub const fn psi_d(k: usize, i: usize, j: usize) -> usize {
        PSI_D + 6 * k + SYM[i][j]
    }

    /// Index ranges of the 44 cleaning fields.
    pub const CLEANING_RANGES: [(usize, usize); 4] = [
        (PSI_A, PHI_A + 1),
        (PSI_B, PHI_B + 3),
        (PSI_D, PHI_D + 6),
        (PSI_P, PHI_P + 1),
    ];

    pub fn is_cleaning(c: usize) -> bool {
        CLEANING_RANGES.iter().any(|&(a, b)| (a..b).contains(&c))
    }
}

/// Toy system offsets. The homogeneous layout is a prefix of the
/// non-homogeneous one.
pub mod toy {
    pub const RHO: usize = 0;
    /// Momentum density `rho v_k`.
    pub const MOM: usize = 1;
    pub const J: usize = 4;
    pub const PSI: usize = 7;
    pub const PHI: usize = 10;
    /// Burgers vector.
    pub const B: usize = 11;
    pub const CHI: usize = 14;
    pub const HOMOGENEOUS_COUNT: usize = 11;
    pub const NONHOMOGENEOUS_COUNT: usize = 15;
}

/// Induction baseline offsets.
pub mod induction {
    pub const E: usize = 0;
    pub const B: usize = 3;
    pub const PHI: usize = 6;
    pub const COUNT: usize = 7;
}

/// Variable count and component names of one system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDescriptor {
    pub kind: SystemKind,
    names: Vec<String>,
    tracer: Option<String>,
}

/// Descriptor with the canonical component ordering for `kind`.
pub fn layout_for(kind: SystemKind) -> SystemDescriptor {
    let names = match kind {
        SystemKind::Foccz4 => ccz4_names(),
        SystemKind::ToyHomogeneous => toy_names(false),
        SystemKind::ToyNonhomogeneous => toy_names(true),
        SystemKind::InductionGlm => induction_names(),
    };
    debug_assert_eq!(names.len(), kind.base_count());
    SystemDescriptor {
        kind,
        names,
        tracer: None,
    }
}

impl SystemDescriptor {
    /// Appends one passively advected scalar after the system's own variables.
    pub fn with_tracer(mut self, name: &str) -> Self {
        if self.tracer.is_none() {
            self.names.push(name.to_string());
            self.tracer = Some(name.to_string());
        }
        self
    }

    pub fn count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn tracer(&self) -> Option<&str> {
        self.tracer.as_deref()
    }

    /// Components stored as logarithms (exposed exponentiated in I/O).
    pub fn is_log_stored(&self, c: usize) -> bool {
        self.kind == SystemKind::Foccz4 && (c == ccz4::LN_ALPHA || c == ccz4::LN_PHI)
    }

    /// Name used in files, where logarithmic storage is undone.
    pub fn io_name(&self, c: usize) -> &str {
        if self.kind == SystemKind::Foccz4 {
            match c {
                ccz4::LN_ALPHA => return "alpha",
                ccz4::LN_PHI => return "phi",
                _ => {}
            }
        }
        &self.names[c]
    }

    pub fn io_index_of(&self, name: &str) -> Option<usize> {
        (0..self.count()).find(|&c| self.io_name(c) == name)
    }

    /// Cleaning (GLM) components of this layout.
    pub fn cleaning_components(&self) -> Vec<usize> {
        match self.kind {
            SystemKind::Foccz4 => (0..ccz4::COUNT).filter(|&c| ccz4::is_cleaning(c)).collect(),
            SystemKind::ToyHomogeneous => (toy::PSI..=toy::PHI).collect(),
            SystemKind::ToyNonhomogeneous => {
                let mut v: Vec<usize> = (toy::PSI..=toy::PHI).collect();
                v.push(toy::CHI);
                v
            }
            SystemKind::InductionGlm => vec![induction::PHI],
        }
    }
}

const AXES: [&str; 3] = ["1", "2", "3"];

fn vec_names(out: &mut Vec<String>, stem: &str) {
    for a in AXES {
        out.push(format!("{stem}{a}"));
    }
}

fn sym_names(out: &mut Vec<String>, stem: &str) {
    for s in SYM_LABELS {
        out.push(format!("{stem}{s}"));
    }
}

fn ccz4_names() -> Vec<String> {
    let mut n = Vec::with_capacity(ccz4::COUNT);
    n.push("ln_alpha".into());
    vec_names(&mut n, "beta");
    sym_names(&mut n, "gamma");
    n.push("ln_phi".into());
    n.push("K0".into());
    sym_names(&mut n, "Atilde");
    n.push("K".into());
    n.push("Theta".into());
    vec_names(&mut n, "Ghat");
    vec_names(&mut n, "b");
    vec_names(&mut n, "A");
    vec_names(&mut n, "psiA");
    n.push("phiA".into());
    for k in AXES {
        vec_names(&mut n, &format!("B{k}"));
    }
    for m in AXES {
        vec_names(&mut n, &format!("psiB{m}"));
    }
    vec_names(&mut n, "phiB");
    for k in AXES {
        sym_names(&mut n, &format!("D{k}"));
    }
    for k in AXES {
        sym_names(&mut n, &format!("psiD{k}"));
    }
    sym_names(&mut n, "phiD");
    vec_names(&mut n, "P");
    vec_names(&mut n, "psiP");
    n.push("phiP".into());
    n
}

fn toy_names(nonhomogeneous: bool) -> Vec<String> {
    let mut n = vec!["rho".to_string()];
    vec_names(&mut n, "mom");
    vec_names(&mut n, "J");
    vec_names(&mut n, "psi");
    n.push("phi".into());
    if nonhomogeneous {
        vec_names(&mut n, "Bvec");
        n.push("chi".into());
    }
    n
}

fn induction_names() -> Vec<String> {
    let mut n = Vec::new();
    vec_names(&mut n, "E");
    vec_names(&mut n, "B");
    n.push("phi".into());
    n
}
