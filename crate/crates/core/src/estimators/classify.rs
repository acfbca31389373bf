use std::collections::HashMap;

use serde::Serialize;

use super::EstimateError;
use crate::packing::{FamilyIndex, Owner};
use crate::VertexPermutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum GroupRef {
    Element(usize),
    Leftover(usize),
}

/// Two windows that land in distinct members of one group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub group: GroupRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub good: bool,
    /// Distinct groups touched by the windows; only for good permutations.
    pub f: Option<usize>,
    /// Cyclically consecutive window pairs owned by one common element.
    pub g: usize,
    pub witness: Option<Witness>,
}

pub fn classify(pi: &VertexPermutation, index: &FamilyIndex) -> Result<Classification, EstimateError> {
    let n = index.ranker().n();
    if pi.len() != n {
        return Err(EstimateError::WrongOrder { got: pi.len(), n });
    }
    let mut scratch = Scratch::default();
    classify_order(pi.order(), index, &mut scratch)
}

#[derive(Default)]
pub(super) struct Scratch {
    owners: Vec<Owner>,
    seen: HashMap<GroupRef, (usize, usize)>,
    window: Vec<usize>,
}

fn window(order: &[usize], i: usize, r: usize, out: &mut Vec<usize>) {
    out.clear();
    out.extend((0..r).map(|j| order[(i + j) % order.len()]));
}

pub(super) fn classify_order(
    order: &[usize],
    index: &FamilyIndex,
    s: &mut Scratch,
) -> Result<Classification, EstimateError> {
    let (n, r) = (order.len(), index.ranker().r());
    s.owners.clear();
    for i in 0..n {
        window(order, i, r, &mut s.window);
        let owner = index.owner(&s.window).ok_or_else(|| {
            s.window.sort_unstable();
            EstimateError::FamilyIncomplete(s.window.clone())
        })?;
        s.owners.push(owner);
    }

    let g = (0..n)
        .filter(|&i| match (s.owners[i], s.owners[(i + 1) % n]) {
            (Owner::Element { element: a, .. }, Owner::Element { element: b, .. }) => a == b,
            _ => false,
        })
        .count();

    s.seen.clear();
    let mut witness = None;
    for (i, owner) in s.owners.iter().enumerate() {
        let (group, member) = match *owner {
            Owner::Element { element, group } => (GroupRef::Element(group), element),
            Owner::Leftover { edge, group } => (GroupRef::Leftover(group), edge),
        };
        match s.seen.get(&group) {
            Some(&(m, j)) if m != member => {
                let mut first = Vec::new();
                let mut second = Vec::new();
                window(order, j, r, &mut first);
                window(order, i, r, &mut second);
                first.sort_unstable();
                second.sort_unstable();
                witness = Some(Witness { first, second, group });
                break;
            }
            Some(_) => {}
            None => {
                s.seen.insert(group, (member, i));
            }
        }
    }
    Ok(match witness {
        Some(w) => Classification {
            good: false,
            f: None,
            g,
            witness: Some(w),
        },
        None => Classification {
            good: true,
            f: Some(s.seen.len()),
            g,
            witness: None,
        },
    })
}
