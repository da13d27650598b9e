//! Swap-and-correct protocols: an order for the Bell measurements at the
//! repeater nodes plus syndrome-conditioned Pauli corrections at every node.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::PauliLabel;

/// One measurement outcome per repeater node; `outcomes[k - 1]` is node `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub outcomes: Vec<PauliLabel>,
}

impl Syndrome {
    pub fn new(outcomes: Vec<PauliLabel>) -> Self {
        Self { outcomes }
    }

    /// The `code`-th syndrome of `n_links - 1` outcomes in base-4 order, node 1
    /// most significant.
    pub fn from_index(n_links: usize, code: usize) -> Self {
        let m = n_links - 1;
        let outcomes = (0..m).map(|k| PauliLabel::from_index((code >> (2 * (m - 1 - k))) & 3)).collect();
        Self { outcomes }
    }

    pub fn all(n_links: usize) -> impl Iterator<Item = Syndrome> {
        (0..1usize << (2 * (n_links - 1))).map(move |c| Self::from_index(n_links, c))
    }

    /// Outcome at repeater node `k` (1-based).
    pub fn at(&self, node: usize) -> PauliLabel {
        self.outcomes[node - 1]
    }

    pub fn product(&self) -> PauliLabel {
        self.outcomes.iter().fold(PauliLabel::I, |a, &b| a.mul(b))
    }
}

/// How a node computes its correction from the outcomes it has seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorrectionRule {
    /// Arbitrary function of the visible outcomes, indexed by their base-4
    /// code (earliest visible outcome most significant).
    Table { table: Vec<PauliLabel> },
    /// `constant · Π_{k ∈ product} s_k`.
    Affine {
        #[serde(default)]
        constant: PauliLabel,
        #[serde(default)]
        product: Vec<usize>,
    },
}

impl CorrectionRule {
    pub fn identity() -> Self {
        Self::Affine { constant: PauliLabel::I, product: vec![] }
    }

    pub fn product_of(nodes: Vec<usize>) -> Self {
        Self::Affine { constant: PauliLabel::I, product: nodes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapAndCorrectProtocol {
    pub n_links: usize,
    /// Permutation of the repeater nodes `1..N-1`.
    pub bsm_order: Vec<usize>,
    /// `N + 1` rules, one per node `0..=N`.
    pub rules: Vec<CorrectionRule>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinProtocol {
    Sequential,
    CorrectAtEnd,
}

/// Outcome of [`validate_protocol`].
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub physical: bool,
    pub correct: bool,
    pub maps_perfect_links: Option<bool>,
    pub problems: Vec<String>,
    /// Syndromes (as Pauli names, node 1 first) violating correctness.
    pub failing_syndromes: Vec<Vec<String>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.physical && self.correct && self.maps_perfect_links != Some(false)
    }
}

pub fn builtin_protocol(kind: BuiltinProtocol, n: usize) -> Result<SwapAndCorrectProtocol> {
    if n < 2 {
        return Err(Error::Domain(format!("a chain needs at least 2 links, got {n}")));
    }
    let bsm_order: Vec<usize> = (1..n).collect();
    let rules = match kind {
        BuiltinProtocol::Sequential => (0..=n)
            .map(|k| if k >= 2 { CorrectionRule::product_of(vec![k - 1]) } else { CorrectionRule::identity() })
            .collect(),
        BuiltinProtocol::CorrectAtEnd => (0..=n)
            .map(|k| if k == n { CorrectionRule::product_of((1..n).collect()) } else { CorrectionRule::identity() })
            .collect(),
    };
    Ok(SwapAndCorrectProtocol { n_links: n, bsm_order, rules })
}

impl SwapAndCorrectProtocol {
    /// Repeater nodes whose outcomes `node` may condition on, in the order
    /// they become available.
    pub fn visible(&self, node: usize) -> Vec<usize> {
        if node == 0 || node == self.n_links {
            return self.bsm_order.clone();
        }
        match self.bsm_order.iter().position(|&k| k == node) {
            Some(t) => self.bsm_order[..t].to_vec(),
            None => vec![],
        }
    }

    /// Correction applied at `node` for syndrome `s`.
    pub fn correction(&self, node: usize, s: &Syndrome) -> PauliLabel {
        match &self.rules[node] {
            CorrectionRule::Affine { constant, product } => product.iter().fold(*constant, |a, &k| a.mul(s.at(k))),
            CorrectionRule::Table { table } => {
                let code = self.visible(node).iter().fold(0usize, |c, &k| c * 4 + s.at(k).index());
                table[code]
            }
        }
    }

    pub fn corrections(&self, s: &Syndrome) -> Vec<PauliLabel> {
        (0..=self.n_links).map(|k| self.correction(k, s)).collect()
    }

    /// `P_0 P_N Π_j s_j P_j`, which must be the identity.
    pub fn residual(&self, s: &Syndrome) -> PauliLabel {
        self.corrections(s).into_iter().fold(s.product(), |a, b| a.mul(b))
    }

    /// True if node 0 never applies a correction.
    pub fn left_end_trivial(&self) -> bool {
        match &self.rules[0] {
            CorrectionRule::Affine { constant, product } => constant.is_identity() && product.is_empty(),
            CorrectionRule::Table { table } => table.iter().all(|p| p.is_identity()),
        }
    }

    fn structural_problems(&self) -> Vec<String> {
        let n = self.n_links;
        let mut problems = vec![];
        if n < 2 {
            problems.push(format!("n_links = {n} < 2"));
            return problems;
        }
        let mut sorted = self.bsm_order.clone();
        sorted.sort_unstable();
        if sorted != (1..n).collect::<Vec<_>>() {
            problems.push(format!("bsm_order {:?} is not a permutation of 1..{}", self.bsm_order, n - 1));
            return problems;
        }
        if self.rules.len() != n + 1 {
            problems.push(format!("expected {} correction rules, got {}", n + 1, self.rules.len()));
            return problems;
        }
        for (node, rule) in self.rules.iter().enumerate() {
            let vis = self.visible(node);
            match rule {
                CorrectionRule::Affine { product, .. } => {
                    for k in product {
                        if !vis.contains(k) {
                            problems.push(format!("node {node} uses the outcome of node {k} before it is available"));
                        }
                    }
                }
                CorrectionRule::Table { table } => {
                    let need = 1usize << (2 * vis.len());
                    if table.len() != need {
                        problems.push(format!("node {node}: table has {} entries, expected {need}", table.len()));
                    }
                }
            }
        }
        problems
    }

    /// Exact correctness check for protocols built from affine rules only:
    /// constants must multiply to I and every outcome must appear an even
    /// number of times overall (once from the syndrome itself).
    fn affine_correct(&self) -> Option<bool> {
        let mut constant = PauliLabel::I;
        let mut parity = vec![1u8; self.n_links];
        for rule in &self.rules {
            match rule {
                CorrectionRule::Affine { constant: c, product } => {
                    constant = constant.mul(*c);
                    for &k in product {
                        parity[k] ^= 1;
                    }
                }
                CorrectionRule::Table { .. } => return None,
            }
        }
        Some(constant.is_identity() && parity[1..].iter().all(|&b| b == 0))
    }
}

/// Physicality (structural) and correctness over every syndrome for N ≤ 8;
/// affine-only protocols are checked symbolically for any N. For N ≤ 4 the
/// chain of perfect links is also simulated for every syndrome.
pub fn validate_protocol(p: &SwapAndCorrectProtocol) -> ValidationReport {
    let mut report = ValidationReport { problems: p.structural_problems(), ..Default::default() };
    report.physical = report.problems.is_empty();
    if !report.physical {
        return report;
    }
    let n = p.n_links;
    if n <= 8 {
        for s in Syndrome::all(n) {
            if !p.residual(&s).is_identity() {
                if report.failing_syndromes.is_empty() {
                    report.problems.push(format!(
                        "correction condition fails for syndrome ({})",
                        s.outcomes.iter().map(|l| l.name()).collect::<Vec<_>>().join(", ")
                    ));
                }
                report.failing_syndromes.push(s.outcomes.iter().map(|l| l.name().to_string()).collect());
            }
        }
        report.correct = report.failing_syndromes.is_empty();
    } else {
        match p.affine_correct() {
            Some(ok) => {
                report.correct = ok;
                if !ok {
                    report.problems.push("affine corrections do not cancel the syndrome".into());
                }
            }
            None => {
                report.correct = false;
                report.problems.push(format!("cannot enumerate 4^{} syndromes for a table protocol", n - 1));
            }
        }
    }
    if n <= 4 && report.correct {
        let ok = super::sim::perfect_links_check(p);
        report.maps_perfect_links = Some(ok);
        if !ok {
            report.problems.push("perfect links are not mapped to |Ψ00⟩".into());
        }
    }
    report
}

/// A random valid protocol: random measurement order, arbitrary lookup
/// tables at nodes `0..N-1`, and the last node's table solved from the
/// correction condition.
pub fn random_protocol(rng: &mut impl Rng, n: usize) -> SwapAndCorrectProtocol {
    assert!((2..=8).contains(&n));
    let mut bsm_order: Vec<usize> = (1..n).collect();
    bsm_order.shuffle(rng);
    let mut p = SwapAndCorrectProtocol { n_links: n, bsm_order, rules: vec![CorrectionRule::identity(); n + 1] };
    for node in 0..n {
        let size = 1usize << (2 * p.visible(node).len());
        let table = (0..size).map(|_| PauliLabel::from_index(rng.gen_range(0..4))).collect();
        p.rules[node] = CorrectionRule::Table { table };
    }
    // visible order of node N is bsm_order, but Syndrome::from_index is in node
    // order, so build the table by evaluating per syndrome
    let mut last = vec![PauliLabel::I; 1usize << (2 * (n - 1))];
    for s in Syndrome::all(n) {
        let mut acc = s.product();
        for node in 0..n {
            acc = acc.mul(p.correction(node, &s));
        }
        let code = p.bsm_order.iter().fold(0usize, |c, &k| c * 4 + s.at(k).index());
        last[code] = acc;
    }
    p.rules[n] = CorrectionRule::Table { table: last };
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn correct_at_end_last_correction_is_the_product() {
        let p = builtin_protocol(BuiltinProtocol::CorrectAtEnd, 3).unwrap();
        let s = Syndrome::new(vec![PauliLabel::X, PauliLabel::Z]);
        assert_eq!(p.correction(3, &s), PauliLabel::XZ);
        assert!(p.correction(1, &s).is_identity());
    }

    #[test]
    fn sequential_identity_syndrome() {
        let p = builtin_protocol(BuiltinProtocol::Sequential, 3).unwrap();
        let s = Syndrome::new(vec![PauliLabel::I; 2]);
        assert!(p.corrections(&s).iter().all(|c| c.is_identity()));
    }

    #[test]
    fn builtins_validate() {
        for n in 2..=6 {
            for kind in [BuiltinProtocol::Sequential, BuiltinProtocol::CorrectAtEnd] {
                let r = validate_protocol(&builtin_protocol(kind, n).unwrap());
                assert!(r.is_valid(), "{kind:?} {n}: {:?}", r.problems);
            }
        }
        let r = validate_protocol(&builtin_protocol(BuiltinProtocol::CorrectAtEnd, 12).unwrap());
        assert!(r.is_valid());
    }

    #[test]
    fn missing_final_correction_is_caught() {
        let mut p = builtin_protocol(BuiltinProtocol::CorrectAtEnd, 3).unwrap();
        p.rules[3] = CorrectionRule::identity();
        let r = validate_protocol(&p);
        assert!(!r.correct);
        assert_eq!(r.failing_syndromes[0], vec!["I", "Z"]);
    }

    #[test]
    fn acausal_rule_is_unphysical() {
        let mut p = builtin_protocol(BuiltinProtocol::Sequential, 3).unwrap();
        p.rules[1] = CorrectionRule::product_of(vec![2]);
        assert!(!validate_protocol(&p).physical);
    }

    #[test]
    fn random_protocols_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            for _ in 0..10 {
                let r = validate_protocol(&random_protocol(&mut rng, n));
                assert!(r.is_valid(), "{:?}", r.problems);
            }
        }
    }

    #[test]
    fn protocol_json_roundtrip() {
        let p = builtin_protocol(BuiltinProtocol::Sequential, 3).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        let q: SwapAndCorrectProtocol = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let q: SwapAndCorrectProtocol =
            serde_json::from_str(r#"{"n_links":2,"bsm_order":[1],"rules":[{"constant":"I"},{},{"product":[1]}]}"#)
                .unwrap();
        assert!(validate_protocol(&q).is_valid());
    }
}
