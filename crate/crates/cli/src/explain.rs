//! Static descriptions of the check names.

pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
    pub formula: &'static str,
}

pub const CHECK_NAMES: [&str; 15] = [
    "is-cocycle",
    "cohomologous",
    "kernel-identity",
    "omega-coboundary",
    "sigma-hom",
    "sigma-tensor",
    "pentagon-sigma",
    "intertwiners",
    "minimality",
    "functor-f",
    "pvm",
    "cuntz-row",
    "cuntz-equals",
    "prove",
    "numeric-soundness",
];

pub const ENTRIES: [Entry; 15] = [
    Entry {
        name: "is-cocycle",
        summary: "exact 3-cocycle condition over all quadruples of group elements",
        formula: "ω(h,k,l) ω(g,hk,l) ω(g,h,k) = ω(gh,k,l) ω(g,h,kl)",
    },
    Entry {
        name: "cohomologous",
        summary: "searches a normalized 2-cochain witnessing that two 3-cocycles differ by a coboundary",
        formula: "ω₁ ω₂⁻¹ = db,  db(g,h,k) = b(g,h) b(gh,k) b(g,hk)⁻¹ b(h,k)⁻¹",
    },
    Entry {
        name: "kernel-identity",
        summary: "the lift α of the G-kernel composes up to Ad u with the obstruction phase ω",
        formula: "α_g α_h = Ad(u_{g,h}) α_{gh},  u_{g,h} u_{gh,k} = ω(g,h,k) α_g(u_{h,k}) u_{g,hk}",
    },
    Entry {
        name: "omega-coboundary",
        summary: "the obstruction measured from the matrix model equals the coboundary of b",
        formula: "ω = db",
    },
    Entry {
        name: "sigma-hom",
        summary: "σ_X is a unital *-homomorphism M → M ⊗ B(L²X)",
        formula: "σ_X(mn) = σ_X(m) σ_X(n),  σ_X(m*) = σ_X(m)*,  σ_X(1) = 1",
    },
    Entry {
        name: "sigma-tensor",
        summary: "σ respects products of objects up to the unitary u_{X,Y}",
        formula: "(σ_X ⊗ id) σ_Y(m) = u_{X,Y} (1 ⊗ ι) σ_{X×Y}(m) (1 ⊗ ι)* u_{X,Y}*",
    },
    Entry {
        name: "pentagon-sigma",
        summary: "the two ways of assembling u on a triple product agree up to the associator",
        formula: "(u_{X,Y} ⊗ 1_Z) u_{X×Y,Z} = (1 ⊗ ω_{X,Y,Z}) σ_X(u_{Y,Z}) u_{X,Y×Z}",
    },
    Entry {
        name: "intertwiners",
        summary: "orthonormal basis of the intertwiner space between σ_X and σ_Y",
        formula: "{ T : T σ_X(m) = σ_Y(m) T for all m }",
    },
    Entry {
        name: "minimality",
        summary: "disjointly supported measure objects have no intertwiners; compares the pairwise and complement forms",
        formula: "(i) Hom(σ_E, σ_F) = 0 for disjoint E, F;  (ii) Hom(σ_E, σ_{E^c}) = 0",
    },
    Entry {
        name: "functor-f",
        summary: "graded maps are sent to intertwiners, faithfully",
        formula: "F(t) = 1_M ⊗ t,  F(t) σ_X(m) = σ_Y(m) F(t)",
    },
    Entry {
        name: "pvm",
        summary: "grade fibers give a projection-valued measure on the group",
        formula: "E(g)² = E(g) = E(g)*,  E(g) E(h) = 0 (g ≠ h),  Σ_g E(g) = 1",
    },
    Entry {
        name: "cuntz-row",
        summary: "the generators of O_n form a unitary row",
        formula: "v_i* v_j = δ_ij,  Σ_i v_i v_i* = 1",
    },
    Entry {
        name: "cuntz-equals",
        summary: "decides equality of two elements of O_n by expansion to a common level",
        formula: "x = y  ⇔  expand_L(x) = expand_L(y)",
    },
    Entry {
        name: "prove",
        summary: "replays a rewriting proof script step by step and compares the result with the goal",
        formula: "start →R₁ … →Rₙ goal, every step type-preserving",
    },
    Entry {
        name: "numeric-soundness",
        summary: "instantiates each rewrite rule in the matrix model and measures both sides",
        formula: "‖⟦lhs⟧ − ⟦rhs⟧‖ ≤ tol, or symbolic-only",
    },
];

pub fn lookup(name: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name)
}

pub fn explain(name: &str) -> Option<String> {
    lookup(name).map(|e| format!("{}\n  {}\n  {}\n", e.name, e.summary, e.formula))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_names() {
        let names: Vec<&str> = ENTRIES.iter().map(|e| e.name).collect();
        assert_eq!(names, CHECK_NAMES);
    }
}
