//! Polygon gluing schemas: a single polygon whose sides are either glued in
//! pairs (same letter twice) or left free (marked as punctures/boundary).
//!
//! The fundamental group is generated by one loop per glued pair — the loop
//! that leaves the polygon through one side of the pair and re-enters through
//! the partner. Relators are the words read by small loops around identified
//! interior vertices.

use crate::error::{Error, Result};
use crate::exact::{dyadic_approx, orient, rat, strictly_inside_convex, Pt, Rat};
use crate::word::{Letter, Word};
use num_traits::ToPrimitive;
use std::f64::consts::PI;

/// One polygon side as written in the gluing word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideLabel {
    pub letter: char,
    /// Lowercase letter in the word: the side's arrow runs counter-clockwise.
    pub positive: bool,
}

/// A pair of sides identified with each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GluedPair {
    pub letter: char,
    /// Side index of the first occurrence in the word.
    pub first: usize,
    /// Side index of the second occurrence.
    pub second: usize,
    /// True when the two occurrences have opposite exponent signs, i.e. the
    /// gluing preserves orientation.
    pub preserving: bool,
}

/// The homeomorphism type derived from the identified CW structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    Sphere,
    ProjectivePlane,
    Disk,
    Annulus,
    Moebius,
    Torus,
    KleinBottle,
    HyperbolicClosed,
    HyperbolicPunctured,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Sphere => "sphere",
            SurfaceKind::ProjectivePlane => "projective plane",
            SurfaceKind::Disk => "disk",
            SurfaceKind::Annulus => "annulus",
            SurfaceKind::Moebius => "Moebius band",
            SurfaceKind::Torus => "torus",
            SurfaceKind::KleinBottle => "Klein bottle",
            SurfaceKind::HyperbolicClosed => "closed hyperbolic surface",
            SurfaceKind::HyperbolicPunctured => "punctured hyperbolic surface",
        }
    }
}

/// The exact polygon the curves are drawn in.
///
/// Sides with at least three polygon corners are single segments of a convex
/// polygon inscribed in the unit circle (squares use the unit square instead,
/// so flat gluings are exact). One- and two-sided polygons get piecewise
/// sides; the interior chain vertices ("markers") count like corners for
/// general-position purposes.
#[derive(Debug, Clone)]
pub struct Polygon {
    corners: Vec<Pt>,
    chains: Vec<Vec<Pt>>,
    ring: Vec<Pt>,
}

impl Polygon {
    fn build(n: usize) -> Polygon {
        let (corners, chains): (Vec<Pt>, Vec<Vec<Pt>>) = match n {
            0 => unreachable!("empty schemas are rejected before polygon construction"),
            1 => {
                let apex = Pt::from_ints(0, 1);
                let corners = vec![apex.clone()];
                let chains = vec![vec![
                    apex.clone(),
                    Pt::from_ints(-1, -1),
                    Pt::from_ints(1, -1),
                    apex,
                ]];
                (corners, chains)
            }
            2 => {
                let left = Pt::from_ints(-1, 0);
                let right = Pt::from_ints(1, 0);
                let corners = vec![left.clone(), right.clone()];
                let chains = vec![
                    vec![left.clone(), Pt::from_ints(0, -1), right.clone()],
                    vec![right, Pt::from_ints(0, 1), left],
                ];
                (corners, chains)
            }
            4 => {
                let corners = vec![
                    Pt::from_ints(0, 0),
                    Pt::from_ints(1, 0),
                    Pt::from_ints(1, 1),
                    Pt::from_ints(0, 1),
                ];
                let chains = (0..4)
                    .map(|i| vec![corners[i].clone(), corners[(i + 1) % 4].clone()])
                    .collect();
                (corners, chains)
            }
            _ => {
                // Rational points exactly on the unit circle via the
                // tangent-half-angle parametrization of rounded angles.
                let corners: Vec<Pt> = (0..n)
                    .map(|k| {
                        let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / n as f64;
                        let t = dyadic_approx((theta * 0.5).tan(), 16);
                        let t2 = &t * &t;
                        let denom = rat(1) + &t2;
                        let x = (rat(1) - &t2) / denom.clone();
                        let y = (rat(2) * &t) / denom;
                        Pt::new(x, y)
                    })
                    .collect();
                let chains = (0..n)
                    .map(|i| vec![corners[i].clone(), corners[(i + 1) % n].clone()])
                    .collect();
                (corners, chains)
            }
        };
        let mut ring = Vec::new();
        for chain in &chains {
            for v in &chain[..chain.len() - 1] {
                ring.push(v.clone());
            }
        }
        debug_assert!(
            (0..ring.len()).all(|i| {
                orient(&ring[i], &ring[(i + 1) % ring.len()], &ring[(i + 2) % ring.len()]) == 1
            }),
            "polygon ring must be strictly convex and counter-clockwise"
        );
        Polygon { corners, chains, ring }
    }

    pub fn side_count(&self) -> usize {
        self.chains.len()
    }

    pub fn corner(&self, i: usize) -> &Pt {
        &self.corners[i]
    }

    pub fn corners(&self) -> &[Pt] {
        &self.corners
    }

    /// Chain vertices of a side, from corner `i` to corner `i+1` inclusive.
    pub fn chain(&self, side: usize) -> &[Pt] {
        &self.chains[side]
    }

    /// All boundary vertices (corners and markers) in ccw order.
    pub fn ring(&self) -> &[Pt] {
        &self.ring
    }

    /// Interior chain vertices of all sides.
    pub fn markers(&self) -> impl Iterator<Item = &Pt> {
        self.chains
            .iter()
            .flat_map(|chain| chain[1..chain.len() - 1].iter())
    }

    /// Local parameters where a side's chain has interior vertices.
    pub fn marker_locals(&self, side: usize) -> Vec<Rat> {
        let m = self.chains[side].len() - 1;
        (1..m).map(|j| Rat::new((j as i64).into(), (m as i64).into())).collect()
    }

    /// Point at local (counter-clockwise) parameter `local ∈ [0,1]` on a side.
    /// Chain segments carry equal parameter weight.
    pub fn side_point(&self, side: usize, local: &Rat) -> Pt {
        let chain = &self.chains[side];
        let m = chain.len() - 1;
        let scaled = local * rat(m as i64);
        let mut idx = scaled
            .floor()
            .to_integer()
            .to_i64()
            .expect("side parameter in sane range") as isize;
        idx = idx.clamp(0, m as isize - 1);
        let frac = &scaled - rat(idx as i64);
        chain[idx as usize].lerp(&chain[idx as usize + 1], &frac)
    }

    /// Whether a point is strictly inside the polygon.
    pub fn contains_strictly(&self, p: &Pt) -> bool {
        strictly_inside_convex(&self.ring, p)
    }

    /// All boundary segments with their owning side index.
    pub fn boundary_segments(&self) -> impl Iterator<Item = (usize, &Pt, &Pt)> {
        self.chains.iter().enumerate().flat_map(|(side, chain)| {
            chain.windows(2).map(move |w| (side, &w[0], &w[1]))
        })
    }
}

/// A parsed and validated gluing schema.
#[derive(Debug, Clone)]
pub struct SurfaceSchema {
    sides: Vec<SideLabel>,
    punctures: Vec<usize>,
    pairs: Vec<GluedPair>,
    pair_of_side: Vec<Option<usize>>,
    kind: SurfaceKind,
    euler: i64,
    orientable: bool,
    corner_class: Vec<usize>,
    class_count: usize,
    class_interior: Vec<bool>,
    relators: Vec<Word>,
    polygon: Polygon,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

impl SurfaceSchema {
    /// Parse a side word plus puncture marks into a validated schema.
    pub fn parse(word: &str, punctures: &[usize]) -> Result<SurfaceSchema> {
        let trimmed = word.trim();
        if trimmed.is_empty() {
            return Err(Error::EmptySchema);
        }
        let mut sides = Vec::new();
        for ch in trimmed.chars() {
            if !ch.is_ascii_alphabetic() {
                return Err(Error::MalformedWord {
                    reason: format!("side label `{ch}` is not an ASCII letter"),
                });
            }
            sides.push(SideLabel {
                letter: ch.to_ascii_lowercase(),
                positive: ch.is_ascii_lowercase(),
            });
        }
        let n = sides.len();

        let mut puncture_list: Vec<usize> = punctures.to_vec();
        puncture_list.sort_unstable();
        puncture_list.dedup();
        if let Some(&bad) = puncture_list.iter().find(|&&i| i >= n) {
            return Err(Error::MalformedWord {
                reason: format!("puncture index {bad} is out of range for {n} sides"),
            });
        }

        // Pair up letter occurrences.
        let mut occurrences: Vec<(char, Vec<usize>)> = Vec::new();
        for (i, side) in sides.iter().enumerate() {
            match occurrences.iter_mut().find(|(l, _)| *l == side.letter) {
                Some((_, list)) => list.push(i),
                None => occurrences.push((side.letter, vec![i])),
            }
        }
        let mut pairs = Vec::new();
        let mut pair_of_side = vec![None; n];
        for (letter, positions) in &occurrences {
            match positions.as_slice() {
                [single] => {
                    if !puncture_list.contains(single) {
                        return Err(Error::MalformedWord {
                            reason: format!(
                                "letter `{letter}` appears once but side {single} is not marked as a puncture"
                            ),
                        });
                    }
                }
                [first, second] => {
                    if let Some(&marked) =
                        puncture_list.iter().find(|i| positions.contains(i))
                    {
                        return Err(Error::MalformedWord {
                            reason: format!(
                                "side {marked} is marked as a puncture but letter `{letter}` is glued"
                            ),
                        });
                    }
                    let preserving = sides[*first].positive != sides[*second].positive;
                    pair_of_side[*first] = Some(pairs.len());
                    pair_of_side[*second] = Some(pairs.len());
                    pairs.push(GluedPair {
                        letter: *letter,
                        first: *first,
                        second: *second,
                        preserving,
                    });
                }
                many => {
                    return Err(Error::MalformedWord {
                        reason: format!("letter `{letter}` appears {} times", many.len()),
                    });
                }
            }
        }
        // Every side is now either glued or a puncture.
        for i in 0..n {
            if pair_of_side[i].is_none() && !puncture_list.contains(&i) {
                // Can only happen when a once-occurring letter slipped the
                // puncture check above, which already errored; keep a guard.
                return Err(Error::MalformedWord {
                    reason: format!("side {i} is neither glued nor a puncture"),
                });
            }
        }

        // Identify polygon corners along the gluings (arrow start to arrow
        // start, arrow end to arrow end).
        let arrow_start = |side: usize| -> usize {
            if sides[side].positive {
                side
            } else {
                (side + 1) % n
            }
        };
        let arrow_end = |side: usize| -> usize {
            if sides[side].positive {
                (side + 1) % n
            } else {
                side
            }
        };
        let mut uf = UnionFind::new(n);
        for pair in &pairs {
            uf.union(arrow_start(pair.first), arrow_start(pair.second));
            uf.union(arrow_end(pair.first), arrow_end(pair.second));
        }
        let mut class_ids: Vec<usize> = Vec::new();
        let mut corner_class = vec![0usize; n];
        for c in 0..n {
            let root = uf.find(c);
            let id = match class_ids.iter().position(|&r| r == root) {
                Some(pos) => pos,
                None => {
                    class_ids.push(root);
                    class_ids.len() - 1
                }
            };
            corner_class[c] = id;
        }
        let class_count = class_ids.len();

        let euler =
            class_count as i64 - (pairs.len() as i64 + puncture_list.len() as i64) + 1;
        let orientable = pairs.iter().all(|p| p.preserving);
        let closed = puncture_list.is_empty();
        let kind = match (closed, euler, orientable) {
            (true, 2, _) => SurfaceKind::Sphere,
            (true, 1, _) => SurfaceKind::ProjectivePlane,
            (true, 0, true) => SurfaceKind::Torus,
            (true, 0, false) => SurfaceKind::KleinBottle,
            (true, e, _) if e < 0 => SurfaceKind::HyperbolicClosed,
            (false, 1, _) => SurfaceKind::Disk,
            (false, 0, true) => SurfaceKind::Annulus,
            (false, 0, false) => SurfaceKind::Moebius,
            (false, e, _) if e < 0 => SurfaceKind::HyperbolicPunctured,
            (closed, e, _) => {
                return Err(Error::UnsupportedSchema {
                    reason: format!(
                        "unexpected Euler characteristic {e} for a {} schema",
                        if closed { "closed" } else { "punctured" }
                    ),
                })
            }
        };

        // A vertex class is interior when every incident side is glued.
        let mut class_interior = vec![true; class_count];
        for c in 0..n {
            let ending = (c + n - 1) % n;
            let starting = c;
            if pair_of_side[ending].is_none() || pair_of_side[starting].is_none() {
                class_interior[corner_class[c]] = false;
            }
        }

        // Relator per interior vertex class: walk the link of the identified
        // vertex, emitting one generator letter per edge crossing.
        let mut relators = Vec::new();
        for class in 0..class_count {
            if !class_interior[class] {
                continue;
            }
            let corner = (0..n)
                .find(|&c| corner_class[c] == class)
                .expect("class is nonempty");
            let start = (corner, corner); // (side to cross, corner we hug)
            let mut word = Word::empty();
            let mut state = start;
            for step in 0.. {
                assert!(
                    step <= 2 * n,
                    "vertex link walk failed to close; schema bookkeeping is broken"
                );
                let (side, at) = state;
                let pair_idx =
                    pair_of_side[side].expect("interior vertex links cross glued sides only");
                let pair = &pairs[pair_idx];
                word.push(Letter::new(pair_idx, side == pair.second));
                let partner = if side == pair.first { pair.second } else { pair.first };
                let new_corner = if at == arrow_start(side) {
                    arrow_start(partner)
                } else {
                    arrow_end(partner)
                };
                let ending = (new_corner + n - 1) % n;
                let starting = new_corner;
                let other = if partner == ending { starting } else { ending };
                state = (other, new_corner);
                if state == start {
                    break;
                }
            }
            relators.push(word);
        }

        let polygon = Polygon::build(n);
        Ok(SurfaceSchema {
            sides,
            punctures: puncture_list,
            pairs,
            pair_of_side,
            kind,
            euler,
            orientable,
            corner_class,
            class_count,
            class_interior,
            relators,
            polygon,
        })
    }

    pub fn side_count(&self) -> usize {
        self.sides.len()
    }

    pub fn side(&self, i: usize) -> SideLabel {
        self.sides[i]
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn closed(&self) -> bool {
        self.punctures.is_empty()
    }

    pub fn punctures(&self) -> &[usize] {
        &self.punctures
    }

    pub fn is_free_side(&self, i: usize) -> bool {
        self.pair_of_side[i].is_none()
    }

    pub fn pairs(&self) -> &[GluedPair] {
        &self.pairs
    }

    pub fn pair(&self, g: usize) -> &GluedPair {
        &self.pairs[g]
    }

    pub fn pair_of_side(&self, i: usize) -> Option<usize> {
        self.pair_of_side[i]
    }

    /// Partner side of a glued side.
    pub fn partner(&self, i: usize) -> Option<usize> {
        self.pair_of_side[i].map(|g| {
            let p = &self.pairs[g];
            if p.first == i {
                p.second
            } else {
                p.first
            }
        })
    }

    pub fn generator_count(&self) -> usize {
        self.pairs.len()
    }

    /// Lowercase display letters of the generators, in pair order.
    pub fn alphabet(&self) -> Vec<char> {
        self.pairs.iter().map(|p| p.letter).collect()
    }

    /// The generator letter emitted when a curve exits through this side.
    pub fn crossing_letter(&self, side: usize) -> Option<Letter> {
        self.pair_of_side[side].map(|g| Letter::new(g, side == self.pairs[g].second))
    }

    /// Orientation character of a single generator: −1 when crossing the pair
    /// brings you back mirror-imaged.
    pub fn generator_character(&self, g: usize) -> i8 {
        if self.pairs[g].preserving {
            1
        } else {
            -1
        }
    }

    /// Orientation character of a word: the product over its letters.
    /// This is the first Stiefel–Whitney class evaluated on the loop.
    pub fn orientation_character(&self, w: &Word) -> i8 {
        let mut sign = 1i8;
        for l in w.letters() {
            sign *= self.generator_character(l.gen);
        }
        sign
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.alphabet())
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display(&self.alphabet())
    }

    /// Vertex-link relators (one per interior identified vertex).
    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn vertex_class_count(&self) -> usize {
        self.class_count
    }

    pub fn vertex_class_of_corner(&self, corner: usize) -> usize {
        self.corner_class[corner]
    }

    pub fn class_is_interior(&self, class: usize) -> bool {
        self.class_interior[class]
    }

    pub fn has_interior_vertex_class(&self) -> bool {
        self.class_interior.iter().any(|&b| b)
    }

    pub fn arrow_start_corner(&self, side: usize) -> usize {
        if self.sides[side].positive {
            side
        } else {
            (side + 1) % self.sides.len()
        }
    }

    pub fn arrow_end_corner(&self, side: usize) -> usize {
        if self.sides[side].positive {
            (side + 1) % self.sides.len()
        } else {
            side
        }
    }

    /// Convert an arrow parameter (position along the gluing arrow) to the
    /// side's ccw-local parameter.
    pub fn local_of_arrow(&self, side: usize, arrow: &Rat) -> Rat {
        if self.sides[side].positive {
            arrow.clone()
        } else {
            rat(1) - arrow
        }
    }

    /// Polygon point at an arrow parameter of a side.
    pub fn side_point_at_arrow(&self, side: usize, arrow: &Rat) -> Pt {
        let local = self.local_of_arrow(side, arrow);
        self.polygon.side_point(side, &local)
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    /// Human-readable presentation of the fundamental group.
    pub fn presentation(&self) -> String {
        let alphabet = self.alphabet();
        if alphabet.is_empty() {
            return "< | >".to_string();
        }
        let gens: Vec<String> = alphabet.iter().map(|c| c.to_string()).collect();
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| r.display_normal_form().display(&alphabet))
            .collect();
        if rels.is_empty() {
            format!("< {} | >", gens.join(", "))
        } else {
            format!("< {} | {} >", gens.join(", "), rels.join(", "))
        }
    }
}
