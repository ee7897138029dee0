use serde::{Deserialize, Serialize};

use super::matrix::GameMatrix;
use crate::error::{Error, Result};

/// Largest order for which the cubic associativity check is run.
pub const MAX_GROUP_ORDER: usize = 256;

/// A finite group given by its Cayley table; `table[a][b]` is the index of
/// `a·b`. Every axiom is checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

/// JSON form: `{"order":k,"table":[[...]],"labels":[...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if order > MAX_GROUP_ORDER {
            return Err(Error::InvalidGroup(format!("order {order} exceeds {MAX_GROUP_ORDER}")));
        }
        if table.iter().any(|r| r.len() != order) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= order) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let labels = match labels {
            Some(l) if l.len() != order => {
                return Err(Error::InvalidGroup(format!("{} labels for order {order}", l.len())))
            }
            Some(l) => l,
            None => (0..order).map(|k| k.to_string()).collect(),
        };
        let flat: Vec<usize> = table.concat();
        let op = |a: usize, b: usize| flat[a * order + b];
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if op(op(a, b), c) != op(a, op(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| op(e, a) == a && op(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..order {
            if !(0..order).any(|b| op(a, b) == identity && op(b, a) == identity) {
                return Err(Error::InvalidGroup(format!("{} has no inverse", labels[a])));
            }
        }
        Ok(FiniteGroup { order, table: flat, identity, labels })
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        if spec.order != spec.table.len() {
            return Err(Error::InvalidGroup(format!(
                "declared order {} but table has {} rows",
                spec.order,
                spec.table.len()
            )));
        }
        Self::from_table(spec.table.clone(), spec.labels.clone())
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec {
            order: self.order,
            table: self.table.chunks(self.order).map(<[usize]>::to_vec).collect(),
            labels: Some(self.labels.clone()),
        }
    }

    /// `Z/k` under addition.
    pub fn cyclic(k: usize) -> Result<Self> {
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        Self::from_table(table, None)
    }

    /// Symmetries of the regular k-gon, order `2k`; index `i + k·e` is
    /// `r^i s^e`. Non-abelian for `k ≥ 3`.
    pub fn dihedral(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidGroup("dihedral group needs k ≥ 1".into()));
        }
        let n = 2 * k;
        let table = (0..n)
            .map(|x| {
                let (a, e) = (x % k, x / k);
                (0..n)
                    .map(|y| {
                        let (b, f) = (y % k, y / k);
                        let rot = if e == 0 { (a + b) % k } else { (a + k - b) % k };
                        rot + k * ((e + f) % 2)
                    })
                    .collect()
            })
            .collect();
        let labels = (0..n).map(|x| if x < k { format!("r{x}") } else { format!("r{}s", x - k) }).collect();
        Self::from_table(table, Some(labels))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.op(a, b) == self.op(b, a)))
    }

    fn membership(&self, w: &[usize]) -> Result<Vec<bool>> {
        let mut member = vec![false; self.order];
        for &x in w {
            if x >= self.order {
                return Err(Error::InvalidGroup(format!("element {x} is not in a group of order {}", self.order)));
            }
            member[x] = true;
        }
        Ok(member)
    }
}

/// Exhaustive check that the uniform (Haar) strategy pins the casino's win
/// rate at `|W| / |G|` against every pure reply on either side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupCertificate {
    pub value: f64,
    pub winning_elements: usize,
    pub order: usize,
    /// Casino wins for each of the player's pure choices, casino uniform.
    pub wins_by_player_choice: Vec<usize>,
    /// Casino wins for each of the casino's pure choices, player uniform.
    pub wins_by_casino_choice: Vec<usize>,
    pub verified: bool,
}

/// Casino's win probability `|W| / |G|` when it chooses `x`, the player
/// chooses `y`, and the casino wins if `x·y ∈ W`.
pub fn finite_group_value(g: &FiniteGroup, w: &[usize]) -> Result<GroupCertificate> {
    let member = g.membership(w)?;
    let size = member.iter().filter(|&&m| m).count();
    let n = g.order;
    let by_player = (0..n).map(|y| (0..n).filter(|&x| member[g.op(x, y)]).count()).collect::<Vec<_>>();
    let by_casino = (0..n).map(|x| (0..n).filter(|&y| member[g.op(x, y)]).count()).collect::<Vec<_>>();
    let verified = by_player.iter().chain(&by_casino).all(|&c| c == size);
    Ok(GroupCertificate {
        value: size as f64 / n as f64,
        winning_elements: size,
        order: n,
        wins_by_player_choice: by_player,
        wins_by_casino_choice: by_casino,
        verified,
    })
}

/// Payoff matrix from the player's side: row `i` is the player's `y_i`,
/// column `j` the casino's `x_j`, and the entry is 1 when `x_j·y_i ∉ W`.
pub fn build_game_matrix(g: &FiniteGroup, w: &[usize]) -> Result<GameMatrix> {
    let member = g.membership(w)?;
    GameMatrix::from_fn(g.order, g.order, |i, j| !member[g.op(j, i)])
}
