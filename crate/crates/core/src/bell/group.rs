use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::gate::HeraldKind;
use super::state::BellKind;
use super::tables::TruthTable;
use crate::amplitude::Amplitude;
use crate::error::{Error, Result};

/// Product table on the four Bell kinds, `product[x][y]` = output for input
/// `x` and control `y`, indices in `BellKind::ALL` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub condition: HeraldKind,
    pub elements: [BellKind; 4],
    pub product: [[Option<BellKind>; 4]; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Closure,
    Commutativity,
    Identity,
    SelfInverse,
    Associativity,
    KleinIsomorphism,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Closure => "closure",
            Axiom::Commutativity => "commutativity",
            Axiom::Identity => "unique identity",
            Axiom::SelfInverse => "every element self-inverse",
            Axiom::Associativity => "associativity",
            Axiom::KleinIsomorphism => "isomorphism to Z2 ⊕ Z2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub closure: bool,
    pub commutative: bool,
    pub identity: Option<BellKind>,
    pub self_inverse: bool,
    pub associative: bool,
    /// Element ↦ `(a, b) ∈ Z2 ⊕ Z2` carrying the product to bitwise xor.
    pub isomorphism: Option<Vec<(BellKind, (u8, u8))>>,
    pub violations: Vec<Axiom>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        if self.holds() {
            Ok(self)
        } else {
            let names: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
            Err(Error::InvariantViolation(format!("group axioms violated: {}", names.join(", "))))
        }
    }
}

fn idx(k: BellKind) -> usize {
    BellKind::ALL.iter().position(|&e| e == k).expect("every kind is listed")
}

impl GroupTable {
    pub fn from_truth_table<A: Amplitude>(table: &TruthTable<A>, condition: HeraldKind) -> Self {
        let mut product = [[None; 4]; 4];
        for r in &table.rows {
            product[idx(r.input)][idx(r.control)] = r.output(condition);
        }
        Self { condition, elements: BellKind::ALL, product }
    }

    pub fn mul(&self, x: BellKind, y: BellKind) -> Option<BellKind> {
        self.product[idx(x)][idx(y)]
    }

    /// The table with Ψ and Φ interchanged in every argument and result.
    pub fn family_swapped(&self) -> Self {
        let mut product = [[None; 4]; 4];
        for x in BellKind::ALL {
            for y in BellKind::ALL {
                product[idx(x.family_swapped())][idx(y.family_swapped())] =
                    self.mul(x, y).map(BellKind::family_swapped);
            }
        }
        Self { condition: self.condition, elements: self.elements, product }
    }

    /// Same products, ignoring the condition tag.
    pub fn same_products(&self, other: &GroupTable) -> bool {
        self.product == other.product
    }

    pub fn axioms(&self) -> AxiomReport {
        let all = BellKind::ALL;
        let closure = self.product.iter().flatten().all(Option::is_some);
        let commutative = all.iter().all(|&x| all.iter().all(|&y| self.mul(x, y) == self.mul(y, x)));
        let identities: Vec<BellKind> = all
            .iter()
            .copied()
            .filter(|&e| all.iter().all(|&x| self.mul(e, x) == Some(x) && self.mul(x, e) == Some(x)))
            .collect();
        let identity = (identities.len() == 1).then(|| identities[0]);
        let self_inverse = identity.is_some_and(|e| all.iter().all(|&x| self.mul(x, x) == Some(e)));
        let associative = closure
            && all.iter().all(|&x| {
                all.iter().all(|&y| {
                    all.iter().all(|&z| {
                        let xy = self.mul(x, y).unwrap();
                        let yz = self.mul(y, z).unwrap();
                        self.mul(xy, z) == self.mul(x, yz)
                    })
                })
            });
        let isomorphism = identity.and_then(|e| self.klein_map(e));

        let mut violations = Vec::new();
        for (ok, axiom) in [
            (closure, Axiom::Closure),
            (commutative, Axiom::Commutativity),
            (identity.is_some(), Axiom::Identity),
            (self_inverse, Axiom::SelfInverse),
            (associative, Axiom::Associativity),
            (isomorphism.is_some(), Axiom::KleinIsomorphism),
        ] {
            if !ok {
                violations.push(axiom);
            }
        }
        AxiomReport { closure, commutative, identity, self_inverse, associative, isomorphism, violations }
    }

    /// Search the bijections sending `e` to (0,0) for one that turns the
    /// product into xor on Z2 ⊕ Z2.
    fn klein_map(&self, e: BellKind) -> Option<Vec<(BellKind, (u8, u8))>> {
        let others: Vec<BellKind> = BellKind::ALL.iter().copied().filter(|&k| k != e).collect();
        let images = [(0u8, 1u8), (1, 0), (1, 1)];
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let mut map = vec![(e, (0u8, 0u8))];
            map.extend(others.iter().zip(perm).map(|(&k, p)| (k, images[p])));
            let image = |k: BellKind| map.iter().find(|(m, _)| *m == k).map(|(_, v)| *v).unwrap();
            let ok = BellKind::ALL.iter().all(|&x| {
                BellKind::ALL.iter().all(|&y| {
                    let (a, b) = (image(x), image(y));
                    self.mul(x, y).map(image) == Some((a.0 ^ b.0, a.1 ^ b.1))
                })
            });
            if ok {
                return Some(map);
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = BellKind::ALL
            .iter()
            .map(|&x| {
                let cells: Vec<Value> = BellKind::ALL
                    .iter()
                    .map(|&y| self.mul(x, y).map_or(Value::Null, |k| json!(k.ascii())))
                    .collect();
                json!({ "row": x.ascii(), "products": cells })
            })
            .collect();
        json!({
            "condition": self.condition.to_string(),
            "elements": BellKind::ALL.iter().map(|k| k.ascii()).collect::<Vec<_>>(),
            "table": rows,
        })
    }
}

/// Product table read from the gate outputs under `condition`, with its
/// axiom report.
pub fn group_table<A: Amplitude>(table: &TruthTable<A>, condition: HeraldKind) -> (GroupTable, AxiomReport) {
    let g = GroupTable::from_truth_table(table, condition);
    let report = g.axioms();
    (g, report)
}
