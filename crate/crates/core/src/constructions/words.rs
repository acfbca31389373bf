//! Words over `[k]` and their link to Hamiltonian cycles of `T_r(n, k)`.
//!
//! A word is admissible if every `r` consecutive letters are distinct, and
//! good (for given part sizes) if this also holds cyclically and letter `l`
//! occurs exactly `|A_l|` times. A good word together with an assignment of
//! each part's vertices to the occurrences of its letter is a Hamiltonian
//! cycle of `T_r(n, k)`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{ConstructionError, MultipartiteRGraph};
use crate::combinatorics::falling_factorial;
use crate::{CanonicalCycle, VertexPermutation};

const MAX_ENUMERATION: u64 = 10_000_000;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn counts(&self, k: usize) -> Vec<usize> {
        let mut c = vec![0; k];
        for &l in &self.0 {
            c[l] += 1;
        }
        c
    }

    /// Parses `a..z` letters.
    pub fn parse(s: &str) -> Result<Self, ConstructionError> {
        s.bytes()
            .map(|b| match b {
                b'a'..=b'z' => Ok((b - b'a') as usize),
                _ => Err(ConstructionError::InvalidParams(format!("bad letter {:?} in word", b as char))),
            })
            .collect::<Result<_, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            let c = if l < 26 { (b'a' + l as u8) as char } else { '?' };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub fn is_admissible(w: &[usize], r: usize) -> bool {
    (0..w.len()).all(|i| clear_of(w, i, w[i], r))
}

/// `letter` at position `i` differs from the `r - 1` letters before it.
fn clear_of(w: &[usize], i: usize, letter: usize, r: usize) -> bool {
    w[i.saturating_sub(r - 1)..i].iter().all(|&x| x != letter)
}

pub fn is_good_word(w: &[usize], part_sizes: &[usize], r: usize) -> bool {
    let n = w.len();
    if n < r || w.iter().any(|&l| l >= part_sizes.len()) {
        return false;
    }
    let mut counts = vec![0; part_sizes.len()];
    for &l in w {
        counts[l] += 1;
    }
    counts == part_sizes && (0..n).all(|i| (1..r).all(|j| w[i] != w[(i + j) % n]))
}

/// Number of admissible words of length `t` over `[k]`:
/// `k (k-1) ... (k-r+2) (k-r+1)^(t-r+1)`, or `k (k-1) ... (k-t+1)` when `t < r`.
pub fn count_admissible_words(t: usize, k: usize, r: usize) -> BigUint {
    let (t, k, r) = (t as u64, k as u64, r as u64);
    if t < r {
        return falling_factorial(k, t);
    }
    if k < r {
        return BigUint::from(0u32);
    }
    falling_factorial(k, r - 1) * BigUint::from(k - r + 1).pow((t - r + 1) as u32)
}

pub fn enumerate_admissible(t: usize, k: usize, r: usize) -> Result<Vec<Word>, ConstructionError> {
    let size = (k as u64).checked_pow(t as u32).filter(|&s| s <= MAX_ENUMERATION);
    if size.is_none() {
        return Err(ConstructionError::ScaleLimit(format!(
            "enumeration of {k}^{t} words exceeds {MAX_ENUMERATION}"
        )));
    }
    fn go(w: &mut Vec<usize>, t: usize, k: usize, r: usize, out: &mut Vec<Word>) {
        if w.len() == t {
            out.push(Word(w.clone()));
            return;
        }
        for l in 0..k {
            w.push(l);
            if clear_of(w, w.len() - 1, l, r) {
                go(w, t, k, r, out);
            }
            w.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(t), t, k, r, &mut out);
    Ok(out)
}

/// Uniform admissible word of length `t` conditioned on every letter count
/// lying within `k sqrt(t)` of `t/k` (rejection sampling).
pub fn sample_feasible_word(t: usize, k: usize, r: usize, rng: &mut impl Rng) -> Result<Word, ConstructionError> {
    if k < r {
        return Err(ConstructionError::InvalidParams(format!("need k >= r, got k = {k}, r = {r}")));
    }
    let slack = k as f64 * (t as f64).sqrt();
    let mean = t as f64 / k as f64;
    for _ in 0..10_000 {
        let mut w = Vec::with_capacity(t);
        for i in 0..t {
            let recent = &w[i.saturating_sub(r - 1)..i];
            let choices: Vec<usize> = (0..k).filter(|l| !recent.contains(l)).collect();
            w.push(*choices.choose(rng).expect("k >= r leaves a choice"));
        }
        let w = Word(w);
        if w.counts(k).iter().all(|&c| (c as f64 - mean).abs() <= slack) {
            return Ok(w);
        }
    }
    Err(ConstructionError::ExtensionFailed("no feasible word in 10000 draws".into()))
}

/// Lexicographically least arrangement of `letters` followed by `suffix`
/// that can be appended to `word` keeping it admissible.
fn least_block(word: &[usize], letters: &[usize], suffix: &[usize], r: usize) -> Option<Vec<usize>> {
    let free: Vec<usize> = letters.iter().copied().filter(|l| !suffix.contains(l)).collect();
    let mut buf = word[word.len().saturating_sub(r - 1)..].to_vec();
    let base = buf.len();
    let mut used = vec![false; free.len()];

    fn search(buf: &mut Vec<usize>, free: &[usize], used: &mut [bool], suffix: &[usize], r: usize) -> bool {
        if used.iter().all(|&u| u) {
            let before = buf.len();
            for &l in suffix {
                if !clear_of(buf, buf.len(), l, r) {
                    buf.truncate(before);
                    return false;
                }
                buf.push(l);
            }
            return true;
        }
        for i in 0..free.len() {
            if used[i] || !clear_of(buf, buf.len(), free[i], r) {
                continue;
            }
            used[i] = true;
            buf.push(free[i]);
            if search(buf, free, used, suffix, r) {
                return true;
            }
            buf.pop();
            used[i] = false;
        }
        false
    }

    search(&mut buf, &free, &mut used, suffix, r).then(|| buf[base..].to_vec())
}

/// Extends an admissible word to a good word for the given part sizes using
/// the balance / imbalance / fill / cyclic-closure procedure.
pub fn extend_to_good_word(w: &Word, part_sizes: &[usize], r: usize) -> Result<Word, ConstructionError> {
    let k = part_sizes.len();
    let n: usize = part_sizes.iter().sum();
    if k <= r {
        return Err(ConstructionError::InvalidParams(format!("need k > r, got k = {k}, r = {r}")));
    }
    let (lo, hi) = (*part_sizes.iter().min().unwrap(), *part_sizes.iter().max().unwrap());
    if hi - lo > 1 {
        return Err(ConstructionError::InvalidParams(format!("unbalanced part sizes {part_sizes:?}")));
    }
    if w.0.iter().any(|&l| l >= k) || !is_admissible(&w.0, r) {
        return Err(ConstructionError::InvalidParams(format!("word {w} is not admissible")));
    }
    if w.len() == n && is_good_word(&w.0, part_sizes, r) {
        return Ok(w.clone());
    }
    let fail = |stage: &str, word: &[usize]| {
        ConstructionError::ExtensionFailed(format!(
            "{stage} stage at length {} of {n} (kr = {})",
            word.len(),
            k * r
        ))
    };
    let all: Vec<usize> = (0..k).collect();
    let without = |l: usize| -> Vec<usize> { (0..k).filter(|&x| x != l).collect() };
    let mut word = w.0.clone();
    let mut counts = w.counts(k);
    let push = |word: &mut Vec<usize>, counts: &mut Vec<usize>, block: Vec<usize>| {
        for l in block {
            counts[l] += 1;
            word.push(l);
        }
    };

    // balance: repeatedly skip a most common letter
    loop {
        let (min, max) = (*counts.iter().min().unwrap(), *counts.iter().max().unwrap());
        if min == max {
            break;
        }
        if word.len() + k - 1 > n {
            return Err(fail("balance", &word));
        }
        let top = counts.iter().position(|&c| c == max).unwrap();
        let block = least_block(&word, &without(top), &[], r).ok_or_else(|| fail("balance", &word))?;
        push(&mut word, &mut counts, block);
    }

    // imbalance: one block skipping each smaller part's letter
    if lo != hi {
        for l in (0..k).filter(|&l| part_sizes[l] == lo) {
            let block = least_block(&word, &without(l), &[], r).ok_or_else(|| fail("imbalance", &word))?;
            push(&mut word, &mut counts, block);
        }
    }

    let layers: Vec<i64> = (0..k).map(|l| part_sizes[l] as i64 - counts[l] as i64).collect();
    let x = layers[0];
    if layers.iter().any(|&y| y != x) || x < r as i64 {
        return Err(fail("fill", &word));
    }
    for _ in 0..(x as usize - r) {
        let block = least_block(&word, &all, &[], r).ok_or_else(|| fail("fill", &word))?;
        push(&mut word, &mut counts, block);
    }
    if word.len() < r {
        return Err(fail("closure", &word));
    }

    // closure: stage i ends with the first i letters
    let head: Vec<usize> = word[..r].to_vec();
    for i in 1..=r {
        let block = least_block(&word, &all, &head[..i], r).ok_or_else(|| fail("closure", &word))?;
        push(&mut word, &mut counts, block);
    }

    if !is_good_word(&word, part_sizes, r) {
        return Err(fail("validation", &word));
    }
    Ok(Word(word))
}

/// Maps a word to a vertex order: the `j`-th occurrence of letter `l` is the
/// `j`-th vertex of part `l` in increasing label order.
pub fn word_to_permutation(w: &Word, parts: &[Range<usize>]) -> Result<VertexPermutation, ConstructionError> {
    let orders: Vec<Vec<usize>> = parts.iter().map(|p| p.clone().collect()).collect();
    assign(w, &orders)
}

fn assign(w: &Word, orders: &[Vec<usize>]) -> Result<VertexPermutation, ConstructionError> {
    let mut next = vec![0; orders.len()];
    let mut out = Vec::with_capacity(w.len());
    for &l in &w.0 {
        let v = orders
            .get(l)
            .and_then(|o| o.get(next[l]))
            .ok_or_else(|| ConstructionError::InvalidParams(format!("word {w} does not fit the parts")))?;
        out.push(*v);
        next[l] += 1;
    }
    VertexPermutation::new(out).map_err(|e| ConstructionError::InvalidParams(e.to_string()))
}

/// Random good word with exact letter counts by randomized backtracking.
fn backtrack_good_word(part_sizes: &[usize], r: usize, rng: &mut impl Rng) -> Option<Word> {
    let n: usize = part_sizes.iter().sum();
    fn go(
        w: &mut Vec<usize>,
        left: &mut [usize],
        n: usize,
        r: usize,
        budget: &mut u32,
        rng: &mut impl Rng,
    ) -> bool {
        let i = w.len();
        if i == n {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let mut cand: Vec<usize> = (0..left.len())
            .filter(|&l| left[l] > 0 && clear_of(w, i, l, r))
            // positions that wrap around into this window
            .filter(|&l| !w[..(i + r).saturating_sub(n)].contains(&l))
            .collect();
        cand.shuffle(rng);
        for l in cand {
            w.push(l);
            left[l] -= 1;
            if go(w, left, n, r, budget, rng) {
                return true;
            }
            left[l] += 1;
            w.pop();
        }
        false
    }
    for _ in 0..100 {
        let mut w = Vec::with_capacity(n);
        let mut left = part_sizes.to_vec();
        let mut budget = 20_000;
        if go(&mut w, &mut left, n, r, &mut budget, rng) {
            debug_assert!(is_good_word(&w, part_sizes, r));
            return Some(Word(w));
        }
    }
    None
}

/// Paper-style prefix length `n - 2k(k-1)^2 ceil(sqrt n) - (k-1)^2 - kr`,
/// which is negative at most desk-scale sizes.
fn prefix_length(n: usize, k: usize, r: usize) -> i64 {
    let root = (n as f64).sqrt().ceil() as i64;
    let (n, k, r) = (n as i64, k as i64, r as i64);
    n - 2 * k * (k - 1) * (k - 1) * root - (k - 1) * (k - 1) - k * r
}

/// Samples `count` distinct Hamiltonian cycles of `T_r(n, k)` from good
/// words. Uses feasible-prefix extension when it applies and randomized
/// backtracking otherwise; vertices inside each part are shuffled.
pub fn sample_good_cycles(
    t: &MultipartiteRGraph,
    count: usize,
    rng: &mut impl Rng,
) -> Result<Vec<CanonicalCycle>, ConstructionError> {
    let (k, r, n) = (t.k, t.r, t.n);
    if k <= r {
        return Err(ConstructionError::InvalidParams(format!("need k > r, got k = {k}, r = {r}")));
    }
    if n < r + 2 {
        return Err(ConstructionError::TooSmall { n, min: r + 2 });
    }
    let sizes = t.part_sizes();
    let mut found = BTreeSet::new();
    if count == 0 {
        return Ok(Vec::new());
    }

    // pick the longest prefix length for which extension works
    let start = prefix_length(n, k, r).clamp(0, n.saturating_sub(k * r) as i64) as usize;
    let mut prefix = Some(start);
    loop {
        let Some(len) = prefix else { break };
        let w = sample_feasible_word(len, k, r, rng)?;
        if extend_to_good_word(&w, &sizes, r).is_ok() {
            break;
        }
        prefix = if len == 0 { None } else { Some(len / 2) };
    }

    let budget = 200 * count + 1000;
    for _ in 0..budget {
        if found.len() == count {
            break;
        }
        let word = match prefix {
            Some(len) => {
                let w = sample_feasible_word(len, k, r, rng)?;
                match extend_to_good_word(&w, &sizes, r) {
                    Ok(g) => g,
                    Err(_) => continue,
                }
            }
            None => backtrack_good_word(&sizes, r, rng)
                .ok_or_else(|| ConstructionError::ExtensionFailed("no good word found by backtracking".into()))?,
        };
        let orders: Vec<Vec<usize>> = t
            .parts
            .iter()
            .map(|p| {
                let mut vs: Vec<usize> = p.clone().collect();
                vs.shuffle(rng);
                vs
            })
            .collect();
        let pi = assign(&word, &orders)?;
        let ws = pi.window_set(r).map_err(|e| ConstructionError::InvalidParams(e.to_string()))?;
        if !ws.is_subset_of(&t.graph) {
            return Err(ConstructionError::ExtensionFailed(format!("good word {word} gave a non-cycle")));
        }
        found.insert(pi.canonicalize().expect("n >= 3"));
    }
    if found.len() < count {
        return Err(ConstructionError::ExtensionFailed(format!(
            "found only {} distinct cycles of {count} requested",
            found.len()
        )));
    }
    Ok(found.into_iter().collect())
}
