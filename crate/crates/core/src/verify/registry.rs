//! The claim registry and the statement-to-claim coverage table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorem1,
    Theorem2,
    Identities,
    Lemmas,
    Moore,
    All,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Theorem1, Suite::Theorem2, Suite::Identities, Suite::Lemmas, Suite::Moore, Suite::All];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Identities => "identities",
            Suite::Lemmas => "lemmas",
            Suite::Moore => "moore",
            Suite::All => "all",
        }
    }

    /// Whether a claim filed under `home` runs in this suite.
    pub fn includes(self, home: Suite) -> bool {
        self == Suite::All || home == Suite::All || self == home
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite, Error> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}; expected one of theorem1, theorem2, identities, lemmas, moore, all")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claim {
    pub id: &'static str,
    /// The suite the claim belongs to; `All` means it runs in every suite.
    pub suite: Suite,
    /// The mathematical statement being checked.
    pub anchor: &'static str,
}

const fn claim(id: &'static str, suite: Suite, anchor: &'static str) -> Claim {
    Claim { id, suite, anchor }
}

pub const REGISTRY: &[Claim] = &[
    claim("registry.coverage", Suite::All, "every in-scope statement is mapped to a registered claim"),
    // Hankel determinants of d
    claim("t1.valuation", Suite::Theorem1, "H_k(d) != 0 and ord_u H_k(d) = (q^k-1)(q^{k-1}-1)/(q^2-1)"),
    claim("t1.leading", Suite::Theorem1, "the leading u-coefficient of H_k(d) is B_k(t)"),
    claim("t1.normalised", Suite::Theorem1, "H_k(d)/B_k(t) is normalised, in F_q[t,theta][[u^{q-1}]]"),
    // the double family
    claim("t2.order", Suite::Theorem2, "ord_u E_{j,k} = q^j (q^{2k}-1)/(q^2-1)"),
    claim("t2.integrality", Suite::Theorem2, "E_{j,k} in A[[u]]: B_k(theta) divides the determinant exactly"),
    claim("t2.normalised", Suite::Theorem2, "E_{j,k} is normalised"),
    claim(
        "t2.membership",
        Suite::Theorem2,
        "E_{j,k} is isobaric in E, g, h of weight (q^k-1)(q^j+1)/(q-1), type k, depth <= (q^k-1)/(q-1)",
    ),
    claim("t2.depth_bound", Suite::Theorem2, "depth lower bound (1+q^k)/(32(1+q)(3+2q)^2) as an exact rational"),
    claim("t2.extremal", Suite::Theorem2, "E_{j,k} is the extremal form f_{l,w,k} for k = 1, and for k = 2 when q >= 3"),
    claim("t2.cross_path", Suite::Theorem2, "E_{j,k} = (tau^j H_k(Ebold) / B_k(t)) at t = theta"),
    // identities
    claim("id.generators", Suite::Identities, "first terms of E, g, h and Delta = -h^{q-1}"),
    claim("id.frobenius_split", Suite::Identities, "Frobenius splits as tau chi = chi tau"),
    claim("id.forward_recursion", Suite::Identities, "E_{j,1} from the forward recursion equals (tau^j Ebold) at t = theta"),
    claim("id.closed_forms", Suite::Identities, "E_{-m,1}^{q^m} closed forms: -h, -h g^q, -h (g^{q+1} - [1]^q h^{q-1})^q"),
    claim("id.powersum", Suite::Identities, "E_{-m,1}^{q^m} = sum over monic a of a^{q^m} u_a"),
    claim("id.tau_difference", Suite::Identities, "(t - theta^q) Delta tau^2 d + g tau d - d = 0"),
    claim("id.e_equation", Suite::Identities, "second-order twisted equation for Ebold"),
    claim("id.h_equation", Suite::Identities, "second-order twisted equation for hbold"),
    claim("id.stability", Suite::Identities, "twists of Ebold and hbold in terms of Ebold, hbold, E, g, h"),
    claim("id.relationship", Suite::Identities, "H_k(Ebold) = (-1)^k h^{(q^k-1)/(q-1)} tau H_k(d)"),
    claim("id.sylvester", Suite::Identities, "H_{s,k}^{q+1} - H_{s,k-1}^q H_{s,k+1} = H_{s-1,k}^q H_{s+1,k}"),
    // lemmas
    claim("lemma.d_expansion", Suite::Lemmas, "displayed expansion of d through v^{q^2+q+1}"),
    claim("lemma.degree_in_t", Suite::Lemmas, "deg_t c_s <= l below 1+q^2+...+q^{2l}; milestone leading terms (-1)^l t^l"),
    claim("lemma.s0", Suite::Lemmas, "||s0|| = (q^k-1)(q^{k-1}-1)/((q^2-1)(q-1)) and d_{s0} = B_k(t)"),
    claim("lemma.permutation", Suite::Lemmas, "||s0^sigma|| > ||s0|| for every non-identity permutation"),
    claim("lemma.permutation_degree", Suite::Lemmas, "d_s != 0 forces sorted deg_t c_{s_i} >= i - 1"),
    claim("lemma.hk_expansion", Suite::Lemmas, "H_k(d) = sum over s of d_s v^{||s||}"),
    claim("lemma.divisibility", Suite::Lemmas, "B_k(t) divides every coefficient of H_k(f), f in F_q[t,theta][[v]]"),
    // Moore determinants
    claim("moore.vandermonde", Suite::Moore, "M(0, 1, ..., k-1) = B_k(t)"),
    claim("moore.divisibility", Suite::Moore, "B_k(t) divides M(nu_1, ..., nu_k)"),
];

/// In-scope statements and the claims that check them.
pub const COVERAGE: &[(&str, &[&str])] = &[
    ("definitions of E, g, h, Delta and the brackets", &["id.generators"]),
    ("forward and backward recursions for E_{j,1}", &["id.forward_recursion", "id.closed_forms"]),
    ("determinant definition of E_{j,k} and B_k", &["t2.integrality", "t2.order"]),
    ("vanishing order of E_{j,k}", &["t2.order"]),
    ("integrality and normalisation of E_{j,k}", &["t2.integrality", "t2.normalised"]),
    ("weight, type and depth of E_{j,k}", &["t2.membership"]),
    ("extremality of E_{j,1} and E_{j,2}", &["t2.extremal"]),
    ("integral extremal forms in infinitely many weights", &["t2.extremal", "t2.integrality"]),
    ("power-sum formula for E_{-j,1}^{q^j}", &["id.powersum"]),
    ("Frobenius as the product of tau and chi", &["id.frobenius_split"]),
    ("Sylvester-type identity for H_{s,k}", &["id.sylvester"]),
    ("twisted difference equation for d", &["id.tau_difference"]),
    ("H_k(Ebold) in terms of tau H_k(d)", &["id.relationship"]),
    ("E_{j,k} through the deformation", &["t2.cross_path"]),
    ("nonvanishing, valuation and leading term of H_k(d)", &["t1.valuation", "t1.leading", "t1.normalised"]),
    ("divisibility of H_k(f) by B_k(t)", &["lemma.divisibility"]),
    ("expansion of H_k(d) through the determinants d_s", &["lemma.hk_expansion"]),
    ("Moore determinants", &["moore.vandermonde", "moore.divisibility"]),
    ("degree in t of the coefficients of d", &["lemma.degree_in_t"]),
    ("first terms of d", &["lemma.d_expansion"]),
    ("the multi-index s0", &["lemma.s0"]),
    ("degree pattern of nonzero d_s", &["lemma.permutation_degree"]),
    ("permuted multi-indices", &["lemma.permutation"]),
    ("stability of Ebold and hbold under twists", &["id.stability"]),
    ("second-order equations for Ebold and hbold", &["id.e_equation", "id.h_equation"]),
    ("depth lower bound arithmetic", &["t2.depth_bound"]),
    ("completeness of the claim registry", &["registry.coverage"]),
];

pub fn find(id: &str) -> Option<&'static Claim> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Claims of `suite`, in registry order.
pub fn claims_for(suite: Suite) -> Vec<&'static Claim> {
    REGISTRY.iter().filter(|c| suite.includes(c.suite)).collect()
}

/// Problems with the registry: duplicate ids, coverage rows naming unknown claims, and claims no
/// statement maps to.
pub fn coverage_problems() -> Vec<String> {
    let mut problems = Vec::new();
    for (i, c) in REGISTRY.iter().enumerate() {
        if REGISTRY[..i].iter().any(|d| d.id == c.id) {
            problems.push(format!("duplicate claim id {}", c.id));
        }
    }
    for (topic, ids) in COVERAGE {
        if ids.is_empty() {
            problems.push(format!("no claim for {topic:?}"));
        }
        for id in *ids {
            if find(id).is_none() {
                problems.push(format!("{topic:?} names unknown claim {id}"));
            }
        }
    }
    for c in REGISTRY {
        if !COVERAGE.iter().any(|(_, ids)| ids.contains(&c.id)) {
            problems.push(format!("claim {} is not mapped to any statement", c.id));
        }
    }
    problems
}
