//! Finite markets: goods with a fair-exchange equivalence and a strict
//! down-trade order. Arbitrage is a circular trade chain containing a
//! down-trade.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::consistency::{self, Chain, ConsistencyError};
use crate::relation::{Relation, RelationError, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarketError {
    #[error("fair exchange is not an equivalence relation: {0}")]
    NotEquivalence(String),
    #[error("down trades are not a strict partial order: {0}")]
    NotStrictPartialOrder(String),
    #[error("market admits arbitrage: {0}")]
    ArbitrageExists(TradeChain),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TradeLink {
    FairExchange,
    DownTrade,
}

/// `goods[i]` is traded for `goods[i + 1]` by `links[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeChain {
    pub goods: Vec<String>,
    pub links: Vec<TradeLink>,
}

impl TradeChain {
    fn from_chain(chain: &Chain) -> Self {
        Self {
            goods: chain.nodes().to_vec(),
            links: chain
                .tags()
                .iter()
                .map(|t| {
                    if t.is_strict() {
                        TradeLink::DownTrade
                    } else {
                        TradeLink::FairExchange
                    }
                })
                .collect(),
        }
    }

    /// Closed, every link a trade of the market, at least one down-trade.
    pub fn replays(&self, market: &Market) -> bool {
        let u = market.goods();
        let closed = self.goods.len() == self.links.len() + 1
            && self.goods.len() >= 2
            && self.goods.first() == self.goods.last();
        closed
            && self.links.contains(&TradeLink::DownTrade)
            && self.goods.windows(2).zip(&self.links).all(|(w, link)| {
                let (Some(a), Some(b)) = (u.index_of(&w[0]), u.index_of(&w[1])) else {
                    return false;
                };
                match link {
                    TradeLink::FairExchange => market.fair_exchange().contains(a, b),
                    TradeLink::DownTrade => market.down_trades().contains(a, b),
                }
            })
    }
}

impl fmt::Display for TradeChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.goods[0])?;
        for (g, link) in self.goods[1..].iter().zip(&self.links) {
            let arrow = match link {
                TradeLink::FairExchange => "~fair~",
                TradeLink::DownTrade => "<down<",
            };
            write!(f, " {arrow} {g}")?;
        }
        Ok(())
    }
}

/// A validated market.
#[derive(Debug, Clone, PartialEq)]
pub struct Market {
    fair: Relation,
    down: Relation,
}

/// Builds a market from id pairs; the down-trade list may be empty.
pub fn validate_market<S: AsRef<str>>(
    goods: Arc<Universe>,
    fair_pairs: &[(S, S)],
    down_pairs: &[(S, S)],
) -> Result<Market, MarketError> {
    let resolve = |pairs: &[(S, S)]| -> Result<Vec<(usize, usize)>, RelationError> {
        pairs
            .iter()
            .map(|(a, b)| Ok((goods.resolve(a.as_ref())?, goods.resolve(b.as_ref())?)))
            .collect()
    };
    let fair = Relation::from_index_pairs(goods.clone(), resolve(fair_pairs)?)?;
    let down = Relation::from_index_pairs(goods.clone(), resolve(down_pairs)?)?;
    Market::from_relations(fair, down)
}

impl Market {
    pub fn from_relations(fair: Relation, down: Relation) -> Result<Self, MarketError> {
        fair.check_universe(&down)?;
        if let Some(detail) = equivalence_defect(&fair) {
            return Err(MarketError::NotEquivalence(detail));
        }
        if let Some(detail) = strict_order_defect(&down) {
            return Err(MarketError::NotStrictPartialOrder(detail));
        }
        Ok(Self { fair, down })
    }

    pub fn goods(&self) -> &Arc<Universe> {
        self.fair.universe()
    }

    pub fn fair_exchange(&self) -> &Relation {
        &self.fair
    }

    pub fn down_trades(&self) -> &Relation {
        &self.down
    }

    /// The preorder generated by fair exchanges and down-trades.
    pub fn attainable_trades(&self) -> Relation {
        self.fair
            .union(&self.down)
            .expect("validated on one universe")
            .transitive_closure()
    }

    pub fn detect_arbitrage(&self) -> Option<TradeChain> {
        consistency::chain_consistent(&self.fair, &self.down)
            .expect("validated relations are transitive")
            .witness()
            .map(TradeChain::from_chain)
    }

    /// A total preference preorder with fair exchanges indifferent and
    /// down-trades strict; unique iff the attainable trades are total.
    pub fn complete_preferences(&self) -> Result<Preferences, MarketError> {
        match consistency::common_completion(&self.fair, &self.down) {
            Ok(order) => Ok(Preferences {
                order,
                unique: self.attainable_trades().is_total(),
            }),
            Err(ConsistencyError::Inconsistent(chain)) => {
                Err(MarketError::ArbitrageExists(TradeChain::from_chain(&chain)))
            }
            Err(e) => unreachable!("validated market: {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preferences {
    pub order: Relation,
    pub unique: bool,
}

fn equivalence_defect(r: &Relation) -> Option<String> {
    let u = r.universe();
    let n = r.size();
    if let Some(i) = (0..n).find(|&i| !r.contains(i, i)) {
        return Some(format!("not reflexive at {}", u.id(i)));
    }
    if let Some((a, b)) = r.pairs().find(|&(a, b)| !r.contains(b, a)) {
        return Some(format!("pair ({}, {}) has no reverse", u.id(a), u.id(b)));
    }
    transitivity_defect(r)
}

fn strict_order_defect(r: &Relation) -> Option<String> {
    let u = r.universe();
    if let Some((a, b)) = r.pairs().find(|&(a, b)| r.contains(b, a)) {
        return Some(format!("pairs ({}, {}) and ({}, {}) violate asymmetry", u.id(a), u.id(b), u.id(b), u.id(a)));
    }
    transitivity_defect(r)
}

fn transitivity_defect(r: &Relation) -> Option<String> {
    let u = r.universe();
    for (a, b) in r.pairs() {
        for c in 0..r.size() {
            if r.contains(b, c) && !r.contains(a, c) {
                return Some(format!(
                    "({}, {}) and ({}, {}) present but ({}, {}) missing",
                    u.id(a),
                    u.id(b),
                    u.id(b),
                    u.id(c),
                    u.id(a),
                    u.id(c)
                ));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn goods(ids: &[&str]) -> Arc<Universe> {
        Universe::new(ids.iter().copied()).unwrap()
    }

    fn gamma_market() -> Market {
        let u = goods(&["γ1", "γ2", "γ3", "γ4"]);
        validate_market(
            u,
            &[
                ("γ1", "γ1"),
                ("γ2", "γ2"),
                ("γ3", "γ3"),
                ("γ4", "γ4"),
                ("γ1", "γ4"),
                ("γ4", "γ1"),
                ("γ2", "γ3"),
                ("γ3", "γ2"),
            ],
            &[("γ1", "γ3"), ("γ2", "γ4")],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let u = goods(&["a", "b"]);
        let diag = [("a", "a"), ("b", "b")];
        assert!(validate_market(u.clone(), &diag, &[("a", "b")]).is_ok());
        assert!(validate_market::<&str>(u.clone(), &diag, &[]).is_ok());
        assert!(matches!(
            validate_market(u.clone(), &diag, &[("a", "b"), ("b", "a")]),
            Err(MarketError::NotStrictPartialOrder(_))
        ));
        assert!(matches!(
            validate_market(u.clone(), &[("a", "a")], &[("a", "b")]),
            Err(MarketError::NotEquivalence(_))
        ));
        assert!(matches!(
            validate_market(u, &diag, &[("a", "c")]),
            Err(MarketError::Relation(RelationError::UnknownElement(_)))
        ));
    }

    #[test]
    fn gamma_market_has_arbitrage() {
        let m = gamma_market();
        let t = m.attainable_trades();
        assert_eq!(t.len(), 16);
        let chain = m.detect_arbitrage().unwrap();
        assert_eq!(chain.goods, ["γ1", "γ3", "γ2", "γ4", "γ1"]);
        assert_eq!(
            chain.links,
            [
                TradeLink::DownTrade,
                TradeLink::FairExchange,
                TradeLink::DownTrade,
                TradeLink::FairExchange
            ]
        );
        assert!(chain.replays(&m));
        assert!(matches!(
            m.complete_preferences(),
            Err(MarketError::ArbitrageExists(_))
        ));
    }

    #[test]
    fn two_good_market_has_arbitrage() {
        let u = goods(&["(1,2)", "(5,4)"]);
        let m = validate_market(
            u,
            &[("(1,2)", "(1,2)"), ("(5,4)", "(5,4)"), ("(1,2)", "(5,4)"), ("(5,4)", "(1,2)")],
            &[("(1,2)", "(5,4)")],
        )
        .unwrap();
        let chain = m.detect_arbitrage().unwrap();
        assert!(chain.replays(&m));
        assert_eq!(chain.to_string(), "(1,2) <down< (5,4) ~fair~ (1,2)");
    }

    #[test]
    fn arbitrage_free_preferences() {
        let u = goods(&["a", "b"]);
        let diag = [("a", "a"), ("b", "b")];
        let m = validate_market(u.clone(), &diag, &[("a", "b")]).unwrap();
        assert!(m.detect_arbitrage().is_none());
        let p = m.complete_preferences().unwrap();
        assert!(p.unique);
        assert_eq!(p.order, Relation::new(u.clone(), &[("a", "a"), ("b", "b"), ("a", "b")]).unwrap());

        let m = validate_market::<&str>(u, &diag, &[]).unwrap();
        let p = m.complete_preferences().unwrap();
        assert!(!p.unique);
        assert!(p.order.classify().total_preorder);
    }
}
