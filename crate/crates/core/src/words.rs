//! Free and surface group presentations, word reduction, sphere enumeration,
//! and eventually periodic boundary rays.
//!
//! Letters are nonzero `i32` values: `+g` is the g-th generator (1-based),
//! `-g` its inverse. Words are kept freely reduced; for surface groups they
//! are additionally Dehn-reduced (no factor longer than half the relator).

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Signed 1-based generator index.
pub type Letter = i32;

pub const MAX_FREE_RANK: usize = 26;
pub const MAX_SURFACE_GENUS: usize = 6;

/// Default cap on the number of words in a single sphere.
pub const DEFAULT_SPHERE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Free { rank: usize },
    Surface { genus: usize },
}

/// A finitely generated group presentation: free of rank n >= 2, or the
/// fundamental group of a closed orientable surface of genus g >= 2 with the
/// single product-of-commutators relator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    kind: GroupKind,
}

impl GroupPresentation {
    pub fn free(rank: usize) -> Result<Self> {
        if !(2..=MAX_FREE_RANK).contains(&rank) {
            return Err(Error::InvalidParameter(format!(
                "free rank must be in 2..={MAX_FREE_RANK}, got {rank}"
            )));
        }
        Ok(GroupPresentation {
            kind: GroupKind::Free { rank },
        })
    }

    pub fn surface(genus: usize) -> Result<Self> {
        if !(2..=MAX_SURFACE_GENUS).contains(&genus) {
            return Err(Error::InvalidParameter(format!(
                "surface genus must be in 2..={MAX_SURFACE_GENUS}, got {genus}"
            )));
        }
        Ok(GroupPresentation {
            kind: GroupKind::Surface { genus },
        })
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn generator_count(&self) -> usize {
        match self.kind {
            GroupKind::Free { rank } => rank,
            GroupKind::Surface { genus } => 2 * genus,
        }
    }

    /// Generator names: `a, b, c, ..` for free groups, `a1, b1, a2, b2, ..`
    /// for surface groups.
    pub fn generator_names(&self) -> Vec<String> {
        match self.kind {
            GroupKind::Free { rank } => (0..rank)
                .map(|i| ((b'a' + i as u8) as char).to_string())
                .collect(),
            GroupKind::Surface { genus } => {
                let mut names = Vec::with_capacity(2 * genus);
                for h in 1..=genus {
                    names.push(format!("a{h}"));
                    names.push(format!("b{h}"));
                }
                names
            }
        }
    }

    /// The surface relator `[a1, b1] [a2, b2] .. [ag, bg]`; `None` for free
    /// groups.
    pub fn relator(&self) -> Option<Vec<Letter>> {
        match self.kind {
            GroupKind::Free { .. } => None,
            GroupKind::Surface { genus } => {
                let mut r = Vec::with_capacity(4 * genus);
                for h in 0..genus {
                    let a = (2 * h + 1) as Letter;
                    let b = (2 * h + 2) as Letter;
                    r.extend_from_slice(&[a, b, -a, -b]);
                }
                Some(r)
            }
        }
    }

    fn check_letter(&self, l: Letter) -> Result<()> {
        let n = self.generator_count() as i32;
        if l == 0 || l.abs() > n {
            return Err(Error::InvalidGenerator {
                index: l,
                generators: n as usize,
            });
        }
        Ok(())
    }

    /// Displays a letter sequence with lowercase generators and uppercase
    /// inverses, e.g. `aB` for `a b^-1`.
    pub fn display_letters(&self, letters: &[Letter]) -> String {
        let names = self.generator_names();
        let mut out = String::new();
        for &l in letters {
            let name = &names[(l.abs() - 1) as usize];
            if l > 0 {
                out.push_str(name);
            } else {
                out.push_str(&name.to_uppercase());
            }
        }
        out
    }
}

/// A reduced word over a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Concatenation without reduction; use [`reduce_word`] afterwards when
    /// cancellation is possible.
    pub fn concat(&self, other: &Word) -> Vec<Letter> {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        v
    }
}

/// Free cancellation to a fixed point, via a stack.
fn free_reduce(raw: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        if stack.last().is_some_and(|&top| top == -l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

/// One pass of Dehn replacement: finds a factor strictly longer than half the
/// relator that matches a prefix of some cyclic rotation of the relator or
/// its inverse, and replaces it with the inverse of the rotation's remainder.
fn dehn_pass(word: &[Letter], rotations: &[Vec<Letter>]) -> Option<Vec<Letter>> {
    let relator_len = rotations[0].len();
    let half = relator_len / 2;
    for start in 0..word.len() {
        for rot in rotations {
            let mut m = 0usize;
            while m < relator_len && start + m < word.len() && word[start + m] == rot[m] {
                m += 1;
            }
            if m > half {
                // rot = u v with u the matched piece; u = v^{-1} in the group
                let mut replaced = word[..start].to_vec();
                replaced.extend(rot[m..].iter().rev().map(|&l| -l));
                replaced.extend_from_slice(&word[start + m..]);
                return Some(free_reduce(&replaced));
            }
        }
    }
    None
}

fn relator_rotations(relator: &[Letter]) -> Vec<Vec<Letter>> {
    let n = relator.len();
    let inv: Vec<Letter> = relator.iter().rev().map(|&l| -l).collect();
    let mut rots = Vec::with_capacity(2 * n);
    for base in [relator, inv.as_slice()] {
        for s in 0..n {
            let mut rot = Vec::with_capacity(n);
            rot.extend_from_slice(&base[s..]);
            rot.extend_from_slice(&base[..s]);
            rots.push(rot);
        }
    }
    rots
}

/// Reduces a raw letter sequence: free cancellation to a fixed point, then
/// Dehn's algorithm for surface groups. The result is never longer than the
/// input.
pub fn reduce_word(p: &GroupPresentation, raw: &[Letter]) -> Result<Word> {
    for &l in raw {
        p.check_letter(l)?;
    }
    let mut letters = free_reduce(raw);
    if let Some(relator) = p.relator() {
        let rotations = relator_rotations(&relator);
        while let Some(shorter) = dehn_pass(&letters, &rotations) {
            letters = shorter;
        }
    }
    Ok(Word { letters })
}

/// All reduced (free) or Dehn-reduced (surface) words of the exact length
/// `r`, in depth-first order over `a < a^-1 < b < b^-1 < ..`.
///
/// For free groups the count is exactly `2n (2n-1)^{r-1}` for `r >= 1`. For
/// surface groups the stream can list several representatives of the same
/// group element; downstream minimum statistics only get stronger from that.
pub fn enumerate_sphere(p: &GroupPresentation, r: usize, cap: usize) -> Result<Vec<Word>> {
    if r == 0 {
        return Ok(vec![Word::empty()]);
    }
    let n = p.generator_count();
    if let GroupKind::Free { .. } = p.kind() {
        // closed-form count 2n (2n-1)^{r-1} for the guard
        let mut count: u128 = 2 * n as u128;
        for _ in 1..r {
            count = count.saturating_mul((2 * n - 1) as u128);
            if count > cap as u128 {
                break;
            }
        }
        if count > cap as u128 {
            return Err(Error::GuardExceeded {
                context: "enumerate_sphere",
                size: count.min(usize::MAX as u128) as usize,
                limit: cap,
            });
        }
    }

    let forbidden = p.relator().map(|rel| {
        let window = rel.len() / 2 + 1;
        let mut set: HashSet<Vec<Letter>> = HashSet::new();
        for rot in relator_rotations(&rel) {
            set.insert(rot[..window].to_vec());
        }
        (window, set)
    });

    // letter order: a < a^-1 < b < b^-1 < ..
    let alphabet: Vec<Letter> = (1..=n as Letter).flat_map(|g| [g, -g]).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Letter> = Vec::with_capacity(r);
    dfs_sphere(&alphabet, r, cap, &forbidden, &mut cur, &mut out)?;
    Ok(out)
}

fn dfs_sphere(
    alphabet: &[Letter],
    target: usize,
    cap: usize,
    forbidden: &Option<(usize, HashSet<Vec<Letter>>)>,
    cur: &mut Vec<Letter>,
    out: &mut Vec<Word>,
) -> Result<()> {
    if cur.len() == target {
        if out.len() >= cap {
            return Err(Error::GuardExceeded {
                context: "enumerate_sphere",
                size: out.len() + 1,
                limit: cap,
            });
        }
        out.push(Word {
            letters: cur.clone(),
        });
        return Ok(());
    }
    for &l in alphabet {
        if cur.last().is_some_and(|&top| top == -l) {
            continue;
        }
        cur.push(l);
        let ok = match forbidden {
            Some((window, set)) if cur.len() >= *window => {
                !set.contains(&cur[cur.len() - window..])
            }
            _ => true,
        };
        if ok {
            dfs_sphere(alphabet, target, cap, forbidden, cur, out)?;
        }
        cur.pop();
    }
    Ok(())
}

/// An eventually periodic ray `prefix . period^infinity`, a computable
/// approximant to a boundary point.
///
/// The constructor normalizes: the period is freely and cyclically reduced
/// and primitive (not a proper power), and junction cancellations between
/// the prefix and the periodic tail are absorbed, so equal boundary points
/// with redundant prefixes collapse to one normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundaryRay {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
    depth: usize,
}

impl BoundaryRay {
    pub fn new(
        p: &GroupPresentation,
        prefix: &[Letter],
        period: &[Letter],
        depth: usize,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("ray depth must be >= 1".into()));
        }
        let mut prefix = reduce_word(p, prefix)?.letters;
        let mut period = reduce_word(p, period)?.letters;
        if period.is_empty() {
            return Err(Error::TrivialPeriod);
        }
        // cyclic reduction of the period, conjugating into the prefix:
        // p (x w x^-1)^n = (p x) w^n x^-1 .. ; for the ray only the head
        // matters, so push the conjugator onto the prefix.
        while period.len() >= 2 && period[0] == -period[period.len() - 1] {
            prefix.push(period[0]);
            let first = period.remove(0);
            period.pop();
            let _ = first;
            prefix = free_reduce(&prefix);
            if period.is_empty() {
                return Err(Error::TrivialPeriod);
            }
        }
        // primitive root
        let n = period.len();
        for root_len in 1..n {
            if n % root_len != 0 {
                continue;
            }
            if (root_len..n).all(|i| period[i] == period[i - root_len]) {
                period.truncate(root_len);
                break;
            }
        }
        // absorb junction redundancy so that prefix . period^inf is reduced
        loop {
            if !prefix.is_empty() && *prefix.last().unwrap() == *period.last().unwrap() {
                // p' x . (w x)^inf = p' . (x w)^inf
                prefix.pop();
                let last = period.pop().unwrap();
                period.insert(0, last);
            } else if !prefix.is_empty() && *prefix.last().unwrap() == -period[0] {
                // p' x . (x^-1 w)^inf = p' . (w x^-1)^inf
                prefix.pop();
                let first = period.remove(0);
                period.push(first);
            } else {
                break;
            }
        }
        Ok(BoundaryRay {
            prefix,
            period,
            depth,
        })
    }

    /// Purely periodic ray `period^infinity`.
    pub fn periodic(p: &GroupPresentation, period: &[Letter], depth: usize) -> Result<Self> {
        Self::new(p, &[], period, depth)
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The finite approximant `reduce(prefix . period^n)`.
    pub fn word_at(&self, p: &GroupPresentation, n: usize) -> Result<Word> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "ray depth override must be >= 1".into(),
            ));
        }
        let mut raw = self.prefix.clone();
        for _ in 0..n {
            raw.extend_from_slice(&self.period);
        }
        reduce_word(p, &raw)
    }

    /// The approximant at the ray's own depth.
    pub fn word(&self, p: &GroupPresentation) -> Result<Word> {
        self.word_at(p, self.depth)
    }

    /// Canonical form of the period up to rotation and inversion, used for
    /// the pairwise-distinctness heuristic.
    pub fn period_class(&self) -> Vec<Letter> {
        canonical_cyclic_class(&self.period)
    }

    /// Compact display like `b.(aB)^inf`.
    pub fn display(&self, p: &GroupPresentation) -> String {
        let period = p.display_letters(&self.period);
        if self.prefix.is_empty() {
            format!("({period})^inf")
        } else {
            format!("{}.({period})^inf", p.display_letters(&self.prefix))
        }
    }
}

fn canonical_cyclic_class(word: &[Letter]) -> Vec<Letter> {
    let inv: Vec<Letter> = word.iter().rev().map(|&l| -l).collect();
    let mut best: Option<Vec<Letter>> = None;
    for base in [word, inv.as_slice()] {
        for s in 0..base.len() {
            let mut rot = Vec::with_capacity(base.len());
            rot.extend_from_slice(&base[s..]);
            rot.extend_from_slice(&base[..s]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// Samples `count` boundary rays with pairwise distinct periods.
///
/// Periods are cyclically reduced, primitive, and pairwise non-conjugate up
/// to inversion (compared through their canonical cyclic class), which
/// guarantees pairwise distinct boundary points; the comparison is
/// conservative, so some distinct points are never produced. The first rays
/// are the generator axes `a^inf, b^inf, ..`; the rest are drawn with the
/// seeded generator, so the output is deterministic per seed.
pub fn sample_boundary(
    p: &GroupPresentation,
    count: usize,
    max_len: usize,
    seed: u64,
) -> Result<Vec<BoundaryRay>> {
    if count == 0 {
        return Err(Error::InvalidParameter("ray count must be >= 1".into()));
    }
    if max_len == 0 {
        return Err(Error::InvalidParameter(
            "max period length must be >= 1".into(),
        ));
    }
    let n = p.generator_count();
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    let mut rays: Vec<BoundaryRay> = Vec::with_capacity(count);

    let push_candidate = |period: &[Letter],
                          rays: &mut Vec<BoundaryRay>,
                          seen: &mut HashSet<Vec<Letter>>|
     -> Result<bool> {
        if rays.len() >= count {
            return Ok(false);
        }
        let ray = match BoundaryRay::periodic(p, period, 1) {
            Ok(r) => r,
            Err(_) => return Ok(false),
        };
        if ray.period().len() > max_len {
            return Ok(false);
        }
        let class = ray.period_class();
        if seen.insert(class) {
            rays.push(ray);
            Ok(true)
        } else {
            Ok(false)
        }
    };

    for g in 1..=n as Letter {
        push_candidate(&[g], &mut rays, &mut seen)?;
        if rays.len() == count {
            return Ok(rays);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts_limit = 10_000 + 1_000 * count;
    for _ in 0..attempts_limit {
        if rays.len() == count {
            break;
        }
        let len = rng.random_range(1..=max_len);
        let mut word: Vec<Letter> = Vec::with_capacity(len);
        for pos in 0..len {
            let mut tries = 0;
            loop {
                let g = rng.random_range(1..=n as i32);
                let l = if rng.random::<bool>() { g } else { -g };
                let cancels_prev = word.last().is_some_and(|&t| t == -l);
                let cancels_wrap = pos == len - 1 && len > 1 && word[0] == -l;
                if !cancels_prev && !cancels_wrap {
                    word.push(l);
                    break;
                }
                tries += 1;
                if tries > 64 {
                    break;
                }
            }
        }
        if word.len() != len {
            continue;
        }
        push_candidate(&word, &mut rays, &mut seen)?;
    }
    if rays.len() < count {
        return Err(Error::SamplingExhausted {
            requested: count,
            found: rays.len(),
        });
    }
    Ok(rays)
}
