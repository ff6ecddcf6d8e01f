//! The fundamental group of a schema: word problem, conjugacy with witness,
//! primitive roots, and the framing-ambiguity test.
//!
//! Backends by surface type:
//! - sphere and disk quotients: trivial group;
//! - projective plane: Z/2;
//! - flat square torus: Z²  (exponent vectors);
//! - flat non-orientable square: the glide/translation normal form g^a t^b
//!   with t conjugated to t⁻¹ by g;
//! - punctured surfaces whose identified vertices all reach the boundary:
//!   free group on the gluing pairs;
//! - closed hyperbolic one-vertex schemas: Dehn's algorithm, guarded by an
//!   explicit small-cancellation check on the relator.

use crate::error::{Error, Result};
use crate::schema::{SurfaceKind, SurfaceSchema};
use crate::word::{Letter, Word};
use std::collections::{HashSet, VecDeque};

/// A cyclically reduced representative of a free-homotopy class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicWord {
    rep: Word,
}

impl CyclicWord {
    pub fn word(&self) -> &Word {
        &self.rep
    }

    pub fn is_trivial(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }
}

/// Outcome of a conjugacy test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conjugacy {
    /// Conjugate, with a witness `c` such that `c·v·c⁻¹ = u`.
    Yes { witness: Word },
    No,
    /// The bounded search for the hyperbolic backend ran out without finding
    /// a witness. Treated as "not conjugate" for circles, "unknown" for
    /// graph-level searches.
    Exhausted,
}

impl Conjugacy {
    pub fn is_yes(&self) -> bool {
        matches!(self, Conjugacy::Yes { .. })
    }
}

#[derive(Debug, Clone)]
enum Backend {
    Trivial,
    Cyclic2,
    FreeAbelian,
    Klein(KleinTables),
    Free,
    Dehn(DehnTables),
}

/// Klein-bottle group arithmetic: elements are pairs (a, b) standing for
/// g^a t^b, multiplied by (a,b)·(c,d) = (a+c, b·(-1)^c + d).
#[derive(Debug, Clone)]
struct KleinTables {
    /// Value of each positive generator letter.
    letter_value: Vec<(i64, i64)>,
    /// Letter spelling of g (value (1,0)).
    glide_word: Word,
    /// Letter spelling of t (value (0,1)).
    translation_word: Word,
}

#[derive(Debug, Clone)]
struct DehnTables {
    /// All cyclic rotations of the relator and of its inverse.
    symmetrized: Vec<Word>,
    relator_len: usize,
}

/// Word-problem interface over a schema.
#[derive(Debug, Clone)]
pub struct SurfaceGroup {
    schema: SurfaceSchema,
    backend: Backend,
}

fn klein_mul(x: (i64, i64), y: (i64, i64)) -> (i64, i64) {
    let sign = if y.0 % 2 == 0 { 1 } else { -1 };
    (x.0 + y.0, x.1 * sign + y.1)
}

fn klein_inv(x: (i64, i64)) -> (i64, i64) {
    let sign = if x.0 % 2 == 0 { 1 } else { -1 };
    (-x.0, -x.1 * sign)
}

fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

impl SurfaceGroup {
    pub fn new(schema: &SurfaceSchema) -> Result<SurfaceGroup> {
        let backend = Self::backend_for(schema)?;
        Ok(SurfaceGroup {
            schema: schema.clone(),
            backend,
        })
    }

    pub fn schema(&self) -> &SurfaceSchema {
        &self.schema
    }

    fn backend_for(schema: &SurfaceSchema) -> Result<Backend> {
        match schema.kind() {
            SurfaceKind::Sphere | SurfaceKind::Disk => Ok(Backend::Trivial),
            SurfaceKind::ProjectivePlane => {
                // Z/2 with every generator mapping to the nontrivial element:
                // consistent exactly when all vertex relators have even length.
                if schema.relators().iter().any(|r| r.len() % 2 != 0) {
                    return Err(Error::UnsupportedSchema {
                        reason: "projective-plane schema with an odd vertex relator".into(),
                    });
                }
                Ok(Backend::Cyclic2)
            }
            SurfaceKind::Torus => {
                if schema.generator_count() != 2 {
                    return Err(Error::UnsupportedSchema {
                        reason: "only the square torus schema is supported for word operations"
                            .into(),
                    });
                }
                Ok(Backend::FreeAbelian)
            }
            SurfaceKind::KleinBottle => Self::klein_backend(schema),
            SurfaceKind::Annulus | SurfaceKind::Moebius | SurfaceKind::HyperbolicPunctured => {
                if schema.has_interior_vertex_class() {
                    return Err(Error::UnsupportedSchema {
                        reason: "punctured schema has an interior cone vertex".into(),
                    });
                }
                if schema.punctures().len() != schema.vertex_class_count() {
                    return Err(Error::UnsupportedSchema {
                        reason: "boundary structure too twisted for the free-group backend".into(),
                    });
                }
                Ok(Backend::Free)
            }
            SurfaceKind::HyperbolicClosed => Self::dehn_backend(schema),
        }
    }

    fn klein_backend(schema: &SurfaceSchema) -> Result<Backend> {
        if schema.generator_count() != 2 || schema.relators().len() != 1 {
            return Err(Error::UnsupportedSchema {
                reason: "only square Klein-bottle schemas are supported for word operations"
                    .into(),
            });
        }
        let catalog: [(i64, i64); 8] = [
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ];
        let eval = |values: &[(i64, i64)], w: &Word| -> (i64, i64) {
            w.letters().iter().fold((0, 0), |acc, l| {
                let v = values[l.gen];
                klein_mul(acc, if l.inv { klein_inv(v) } else { v })
            })
        };
        for &v0 in &catalog {
            for &v1 in &catalog {
                let values = vec![v0, v1];
                // Orientation character must match the glide parity.
                let char_ok = (0..2).all(|g| {
                    let odd = values[g].0.rem_euclid(2) == 1;
                    odd == (schema.generator_character(g) == -1)
                });
                if !char_ok {
                    continue;
                }
                if schema
                    .relators()
                    .iter()
                    .any(|r| eval(&values, r) != (0, 0))
                {
                    continue;
                }
                // The assigned values must generate the whole group: find
                // spellings of g = (1,0) and t = (0,1) in a small ball.
                let mut spell: Vec<(Word, (i64, i64))> = vec![(Word::empty(), (0, 0))];
                for _ in 0..3 {
                    let mut next = spell.clone();
                    for (word, value) in &spell {
                        for gen in 0..2 {
                            for inv in [false, true] {
                                let letter = Letter::new(gen, inv);
                                let v = values[gen];
                                let lv = if inv { klein_inv(v) } else { v };
                                let mut w2 = word.clone();
                                w2.push(letter);
                                next.push((w2, klein_mul(*value, lv)));
                            }
                        }
                    }
                    spell = next;
                }
                let find = |target: (i64, i64)| -> Option<Word> {
                    spell
                        .iter()
                        .filter(|(_, v)| *v == target)
                        .min_by_key(|(w, _)| w.len())
                        .map(|(w, _)| w.free_reduce())
                };
                if let (Some(glide_word), Some(translation_word)) = (find((1, 0)), find((0, 1))) {
                    return Ok(Backend::Klein(KleinTables {
                        letter_value: values,
                        glide_word,
                        translation_word,
                    }));
                }
            }
        }
        Err(Error::UnsupportedSchema {
            reason: "unrecognized flat non-orientable gluing".into(),
        })
    }

    fn dehn_backend(schema: &SurfaceSchema) -> Result<Backend> {
        if schema.relators().len() != 1 {
            return Err(Error::UnsupportedSchema {
                reason: "closed hyperbolic schemas must identify all polygon corners to one vertex"
                    .into(),
            });
        }
        let relator = schema.relators()[0].clone();
        let len = relator.len();
        if len < 5 {
            return Err(Error::UnsupportedSchema {
                reason: "relator too short for Dehn reduction".into(),
            });
        }
        let mut symmetrized = Vec::with_capacity(2 * len);
        for base in [relator.clone(), relator.invert()] {
            for k in 0..len {
                let rot = base.rotated(k);
                if !symmetrized.contains(&rot) {
                    symmetrized.push(rot);
                }
            }
        }
        // Small-cancellation guard: pieces are common prefixes of two
        // distinct symmetrized relators. Dehn's algorithm is reliable when
        // pieces are shorter than 1/6 of the relator, or shorter than 1/4
        // with the triangle condition T(4).
        let mut max_piece = 0usize;
        for (i, a) in symmetrized.iter().enumerate() {
            for b in symmetrized.iter().skip(i + 1) {
                let common = a
                    .letters()
                    .iter()
                    .zip(b.letters())
                    .take_while(|(x, y)| x == y)
                    .count();
                max_piece = max_piece.max(common);
            }
        }
        let small_sixth = 6 * max_piece < len;
        let small_quarter = 4 * max_piece < len;
        let t4 = {
            // No cyclic triple x, y, z (none inverse to the previous) where
            // all of xy, yz, zx cancel at the seam.
            let firsts: Vec<Letter> = symmetrized.iter().map(|w| w.letters()[0]).collect();
            let lasts: Vec<Letter> =
                symmetrized.iter().map(|w| *w.letters().last().unwrap()).collect();
            let inverse_pair = |i: usize, j: usize| symmetrized[i] == symmetrized[j].invert();
            let n = symmetrized.len();
            let mut violated = false;
            'outer: for x in 0..n {
                for y in 0..n {
                    if inverse_pair(x, y) || !lasts[x].is_inverse_of(firsts[y]) {
                        continue;
                    }
                    for z in 0..n {
                        if inverse_pair(y, z) || inverse_pair(z, x) {
                            continue;
                        }
                        if lasts[y].is_inverse_of(firsts[z]) && lasts[z].is_inverse_of(firsts[x]) {
                            violated = true;
                            break 'outer;
                        }
                    }
                }
            }
            !violated
        };
        if !(small_sixth || (small_quarter && t4)) {
            return Err(Error::UnsupportedSchema {
                reason: "relator fails the small-cancellation conditions needed for Dehn reduction"
                    .into(),
            });
        }
        Ok(Backend::Dehn(DehnTables {
            symmetrized,
            relator_len: len,
        }))
    }

    // ---- Klein helpers --------------------------------------------------

    fn klein_value(&self, tables: &KleinTables, w: &Word) -> (i64, i64) {
        w.letters().iter().fold((0, 0), |acc, l| {
            let v = tables.letter_value[l.gen];
            klein_mul(acc, if l.inv { klein_inv(v) } else { v })
        })
    }

    fn klein_spell(&self, tables: &KleinTables, value: (i64, i64)) -> Word {
        let power = |base: &Word, e: i64| -> Word {
            if e >= 0 {
                base.repeated(e as usize)
            } else {
                base.invert().repeated((-e) as usize)
            }
        };
        power(&tables.glide_word, value.0)
            .concat(&power(&tables.translation_word, value.1))
            .free_reduce()
    }

    // ---- Dehn helpers ---------------------------------------------------

    /// Replace one subword longer than half the relator, if any.
    fn dehn_step(&self, tables: &DehnTables, w: &Word) -> Option<Word> {
        let half = tables.relator_len / 2;
        let letters = w.letters();
        for start in 0..letters.len() {
            for rel in &tables.symmetrized {
                let rl = rel.letters();
                let mut l = 0;
                while start + l < letters.len() && l < rl.len() && letters[start + l] == rl[l] {
                    l += 1;
                }
                if l > half {
                    // letters[start..start+l] equals the inverse of the rest
                    // of the relator; swap it for the shorter side.
                    let replacement: Vec<Letter> =
                        rl[l..].iter().rev().map(|x| x.inverse()).collect();
                    let mut out: Vec<Letter> = letters[..start].to_vec();
                    out.extend(replacement);
                    out.extend_from_slice(&letters[start + l..]);
                    return Some(Word::from_letters(out));
                }
            }
        }
        None
    }

    fn dehn_reduce_based(&self, tables: &DehnTables, w: &Word) -> Word {
        let mut current = w.free_reduce();
        loop {
            match self.dehn_step(tables, &current) {
                Some(next) => current = next.free_reduce(),
                None => return current,
            }
        }
    }

    /// Cyclic Dehn reduction; the returned conjugator `c` satisfies
    /// `w = c · result · c⁻¹` in the group.
    fn dehn_reduce_cyclic(&self, tables: &DehnTables, w: &Word) -> (Word, Word) {
        let (mut current, mut conj) = self.dehn_reduce_based(tables, w)
            .cyclic_reduce_with_conjugator();
        'outer: loop {
            // Wrap-around relator subwords become visible in some rotation.
            for k in 0..current.len() {
                let rotated = current.rotated(k);
                if let Some(replaced) = self.dehn_step(tables, &rotated) {
                    // rotation by k conjugates: rotated = x⁻¹·current·x with
                    // x the length-k prefix, so current = x·rotated·x⁻¹.
                    let x = Word::from_letters(current.letters()[..k].to_vec());
                    conj = conj.concat(&x).free_reduce();
                    let (reduced, extra) = self
                        .dehn_reduce_based(tables, &replaced)
                        .cyclic_reduce_with_conjugator();
                    conj = conj.concat(&extra).free_reduce();
                    current = reduced;
                    continue 'outer;
                }
            }
            return (current, conj);
        }
    }

    // ---- public operations ----------------------------------------------

    /// Reduce a based word to the backend's canonical or Dehn-reduced form.
    pub fn reduce_based(&self, w: &Word) -> Word {
        match &self.backend {
            Backend::Trivial => Word::empty(),
            Backend::Cyclic2 => {
                let parity: i64 = w
                    .exponent_sums(self.schema.generator_count())
                    .iter()
                    .sum::<i64>()
                    .rem_euclid(2);
                if parity == 0 {
                    Word::empty()
                } else {
                    Word::single(Letter::new(0, false))
                }
            }
            Backend::FreeAbelian => {
                let sums = w.exponent_sums(2);
                let power = |gen: usize, e: i64| -> Vec<Letter> {
                    (0..e.unsigned_abs()).map(|_| Letter::new(gen, e < 0)).collect()
                };
                let mut letters = power(0, sums[0]);
                letters.extend(power(1, sums[1]));
                Word::from_letters(letters)
            }
            Backend::Klein(tables) => {
                let value = self.klein_value(tables, w);
                self.klein_spell(tables, value)
            }
            Backend::Free => w.free_reduce(),
            Backend::Dehn(tables) => self.dehn_reduce_based(tables, w),
        }
    }

    /// Reduce a word as a free-homotopy class representative.
    pub fn reduce_cyclic(&self, w: &Word) -> CyclicWord {
        let rep = match &self.backend {
            Backend::Free => w.cyclic_free_reduce(),
            Backend::Dehn(tables) => self.dehn_reduce_cyclic(tables, w).0,
            _ => self.reduce_based(w).cyclic_free_reduce(),
        };
        CyclicWord { rep }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.reduce_based(w).is_empty()
    }

    pub fn equal_based(&self, u: &Word, v: &Word) -> bool {
        self.reduce_based(&u.concat(&v.invert())).is_empty()
    }

    /// Decide conjugacy of `u` and `v`; a `Yes` carries `c` with c·v·c⁻¹ = u.
    pub fn conjugate_and_witness(&self, u: &Word, v: &Word) -> Conjugacy {
        match &self.backend {
            Backend::Trivial => Conjugacy::Yes {
                witness: Word::empty(),
            },
            Backend::Cyclic2 | Backend::FreeAbelian => {
                if self.equal_based(u, v) {
                    Conjugacy::Yes {
                        witness: Word::empty(),
                    }
                } else {
                    Conjugacy::No
                }
            }
            Backend::Klein(tables) => {
                let (a, b) = self.klein_value(tables, u);
                let (c, d) = self.klein_value(tables, v);
                if a != c {
                    return Conjugacy::No;
                }
                if a.rem_euclid(2) == 0 {
                    if b == d {
                        Conjugacy::Yes {
                            witness: Word::empty(),
                        }
                    } else if b == -d {
                        Conjugacy::Yes {
                            witness: tables.glide_word.clone(),
                        }
                    } else {
                        Conjugacy::No
                    }
                } else if (d - b).rem_euclid(2) == 0 {
                    let k = (d - b) / 2;
                    let witness = if k >= 0 {
                        tables.translation_word.repeated(k as usize)
                    } else {
                        tables.translation_word.invert().repeated((-k) as usize)
                    };
                    Conjugacy::Yes { witness }
                } else {
                    Conjugacy::No
                }
            }
            Backend::Free => {
                let (cu, pu) = u.cyclic_reduce_with_conjugator();
                let (cv, pv) = v.cyclic_reduce_with_conjugator();
                if cu.len() != cv.len() {
                    return Conjugacy::No;
                }
                if cu.is_empty() {
                    return Conjugacy::Yes {
                        witness: Word::empty(),
                    };
                }
                for k in 0..cv.len() {
                    if cv.rotated(k) == cu {
                        let x = Word::from_letters(cv.letters()[..k].to_vec());
                        let witness = pu
                            .concat(&x.invert())
                            .concat(&pv.invert())
                            .free_reduce();
                        return Conjugacy::Yes { witness };
                    }
                }
                Conjugacy::No
            }
            Backend::Dehn(tables) => self.dehn_conjugate(tables, u, v),
        }
    }

    fn dehn_conjugate(&self, tables: &DehnTables, u: &Word, v: &Word) -> Conjugacy {
        let (u_red, pu) = self.dehn_reduce_cyclic(tables, u);
        let (v_red, pv) = self.dehn_reduce_cyclic(tables, v);
        if u_red.is_empty() || v_red.is_empty() {
            return if u_red.is_empty() && v_red.is_empty() {
                Conjugacy::Yes {
                    witness: pu.concat(&pv.invert()).free_reduce(),
                }
            } else {
                Conjugacy::No
            };
        }
        if u_red.len() != v_red.len() {
            // Cyclically Dehn-reduced conjugates have equal length in the
            // small-cancellation regime.
            return Conjugacy::No;
        }
        let half = tables.relator_len / 2;
        // Breadth-first search over length-preserving moves: rotations
        // (conjugations by a prefix) and exact-half relator swaps (identity
        // in the group). States carry wit with state = wit · v_red · wit⁻¹.
        let max_swaps = 3usize;
        let mut visited: HashSet<Vec<Letter>> = HashSet::new();
        let mut queue: VecDeque<(Word, Word, usize)> = VecDeque::new();
        let mut truncated = false;
        for k in 0..v_red.len() {
            let x = Word::from_letters(v_red.letters()[..k].to_vec());
            let rot = v_red.rotated(k);
            if visited.insert(rot.letters().to_vec()) {
                queue.push_back((rot, x.invert().free_reduce(), 0));
            }
        }
        while let Some((word, wit, swaps)) = queue.pop_front() {
            if word == u_red {
                let witness = pu.concat(&wit).concat(&pv.invert()).free_reduce();
                return Conjugacy::Yes { witness };
            }
            if swaps >= max_swaps {
                truncated = true;
                continue;
            }
            let letters = word.letters();
            for start in 0..letters.len() {
                if start + half > letters.len() {
                    break;
                }
                for rel in &tables.symmetrized {
                    let rl = rel.letters();
                    if letters[start..start + half] != rl[..half] {
                        continue;
                    }
                    let replacement: Vec<Letter> =
                        rl[half..].iter().rev().map(|x| x.inverse()).collect();
                    let mut out: Vec<Letter> = letters[..start].to_vec();
                    out.extend(replacement);
                    out.extend_from_slice(&letters[start + half..]);
                    let swapped = Word::from_letters(out).free_reduce();
                    // The swap multiplies by a conjugate of the relator, so
                    // the group element and the witness are unchanged.
                    if swapped.len() != word.len() {
                        continue; // swap collided with a cancellation; skip
                    }
                    for k in 0..swapped.len() {
                        let rot = swapped.rotated(k);
                        if visited.insert(rot.letters().to_vec()) {
                            let x = Word::from_letters(swapped.letters()[..k].to_vec());
                            let wit2 = x.invert().concat(&wit).free_reduce();
                            queue.push_back((rot, wit2, swaps + 1));
                        }
                    }
                }
            }
        }
        if truncated {
            Conjugacy::Exhausted
        } else {
            Conjugacy::No
        }
    }

    /// Maximal root: returns `(u, n)` with `w` conjugate to `uⁿ` and `n` as
    /// large as possible.
    pub fn primitive_root(&self, w: &Word) -> Result<(CyclicWord, u32)> {
        let reduced = self.reduce_cyclic(w);
        if reduced.is_trivial() {
            return Err(Error::NullHomotopicWord);
        }
        match &self.backend {
            Backend::Trivial => unreachable!("trivial backend has no nontrivial words"),
            Backend::Cyclic2 => Ok((reduced, 1)),
            Backend::FreeAbelian => {
                let sums = self.reduce_based(w).exponent_sums(2);
                let g = gcd(sums[0].unsigned_abs(), sums[1].unsigned_abs());
                let root = Word::from_letters(
                    spell_power(0, sums[0] / g as i64)
                        .into_iter()
                        .chain(spell_power(1, sums[1] / g as i64))
                        .collect(),
                );
                Ok((CyclicWord { rep: root }, g as u32))
            }
            Backend::Klein(tables) => {
                let (a, b) = self.klein_value(tables, w);
                let (root_value, n) = klein_root(a, b);
                Ok((
                    CyclicWord {
                        rep: self.klein_spell(tables, root_value),
                    },
                    n,
                ))
            }
            Backend::Free | Backend::Dehn(_) => {
                let len = reduced.len();
                for d in divisors(len) {
                    if d == len {
                        break;
                    }
                    let candidate =
                        Word::from_letters(reduced.word().letters()[..d].to_vec());
                    let power = candidate.repeated(len / d);
                    if self
                        .conjugate_and_witness(reduced.word(), &power)
                        .is_yes()
                    {
                        return Ok((CyclicWord { rep: candidate }, (len / d) as u32));
                    }
                }
                Ok((reduced, 1))
            }
        }
    }

    /// Whether the signed framed invariant is only defined up to sign: true
    /// iff the maximal root of the class reverses orientation.
    pub fn framing_ambiguous(&self, w: &Word) -> Result<bool> {
        let (root, _) = self.primitive_root(w)?;
        Ok(self.schema.orientation_character(root.word()) == -1)
    }

    /// A sample of elements commuting with `w`, used to enumerate candidate
    /// conjugators. `range` bounds the powers/coordinates explored.
    pub fn centralizer_sample(&self, w: &Word, range: i64) -> Vec<Word> {
        let mut out = Vec::new();
        let mut push = |word: Word| {
            if !out.contains(&word) {
                out.push(word);
            }
        };
        match &self.backend {
            Backend::Trivial => push(Word::empty()),
            Backend::Cyclic2 => {
                push(Word::empty());
                push(Word::single(Letter::new(0, false)));
            }
            Backend::FreeAbelian => {
                for i in -range..=range {
                    for j in -range..=range {
                        push(Word::from_letters(
                            spell_power(0, i).into_iter().chain(spell_power(1, j)).collect(),
                        ));
                    }
                }
            }
            Backend::Klein(tables) => {
                let (a, b) = self.klein_value(tables, w);
                if a == 0 && b == 0 {
                    for i in -range..=range {
                        for j in -range..=range {
                            push(self.klein_spell(tables, (i, j)));
                        }
                    }
                } else if a.rem_euclid(2) == 0 && b == 0 {
                    // Central element: everything commutes.
                    for i in -range..=range {
                        for j in -range..=range {
                            push(self.klein_spell(tables, (i, j)));
                        }
                    }
                } else if a == 0 {
                    // Commutes with t^b: all (even, d).
                    for i in -range..=range {
                        for j in -range..=range {
                            push(self.klein_spell(tables, (2 * i, j)));
                        }
                    }
                } else if a.rem_euclid(2) == 1 {
                    // Cyclic, generated by g·t^b.
                    for k in -range..=range {
                        let mut v = (0i64, 0i64);
                        let step = if k >= 0 { (1, b) } else { klein_inv((1, b)) };
                        for _ in 0..k.unsigned_abs() {
                            v = klein_mul(v, step);
                        }
                        push(self.klein_spell(tables, v));
                    }
                } else {
                    // a even, b ≠ 0: commutes with (c even, d) such that ...
                    // direct check over a grid.
                    for i in -range..=range {
                        for j in -range..=range {
                            let cand = (i, j);
                            let lhs = klein_mul(klein_mul(cand, (a, b)), klein_inv(cand));
                            if lhs == (a, b) {
                                push(self.klein_spell(tables, cand));
                            }
                        }
                    }
                }
            }
            Backend::Free | Backend::Dehn(_) => {
                if let Ok((root, _)) = self.primitive_root(w) {
                    for k in -range..=range {
                        let word = if k >= 0 {
                            root.word().repeated(k as usize)
                        } else {
                            root.word().invert().repeated((-k) as usize)
                        };
                        push(word);
                    }
                } else {
                    push(Word::empty());
                }
            }
        }
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

fn spell_power(gen: usize, e: i64) -> Vec<Letter> {
    (0..e.unsigned_abs()).map(|_| Letter::new(gen, e < 0)).collect()
}

/// Root structure of g^a t^b in the Klein group.
fn klein_root(a: i64, b: i64) -> ((i64, i64), u32) {
    if a == 0 {
        // t^b: powers of t only.
        ((0, b.signum()), b.unsigned_abs() as u32)
    } else if a.rem_euclid(2) == 1 {
        // Odd glide part: (g^c t^d)^n = g^(cn) t^d for odd c, odd n.
        ((a.signum(), b), a.unsigned_abs() as u32)
    } else if b == 0 {
        // Even pure glide: g^a = (g^±1)^|a| because odd-glide squares kill t.
        ((a.signum(), 0), a.unsigned_abs() as u32)
    } else {
        // Even a with b ≠ 0: roots keep an even glide part.
        let g = gcd(a.unsigned_abs(), b.unsigned_abs()) as i64;
        let mut best = 1;
        for n in divisors(g as usize) {
            if (a / n as i64).rem_euclid(2) == 0 {
                best = best.max(n);
            }
        }
        ((a / best as i64, b / best as i64), best as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::SurfaceSchema;

    fn group(word: &str, punctures: &[usize]) -> SurfaceGroup {
        let schema = SurfaceSchema::parse(word, punctures).expect("schema parses");
        SurfaceGroup::new(&schema).expect("backend available")
    }

    fn wd(g: &SurfaceGroup, text: &str) -> Word {
        g.schema().parse_word(text).expect("word parses")
    }

    #[test]
    fn torus_relator_reduces_to_nothing() {
        let g = group("abAB", &[]);
        assert!(g.is_trivial(&wd(&g, "abAB")));
        assert_eq!(
            g.schema().display_word(&g.reduce_based(&wd(&g, "aabbA"))),
            "abb"
        );
    }

    #[test]
    fn annulus_words_reduce_freely() {
        let g = group("abAc", &[1, 3]);
        assert_eq!(g.schema().display_word(&g.reduce_based(&wd(&g, "aaA"))), "a");
    }

    #[test]
    fn dehn_reduction_shrinks_long_relator_pieces() {
        let g = group("abABcdCD", &[]);
        let relator = g.schema().relators()[0].clone();
        let five = Word::from_letters(relator.letters()[..5].to_vec());
        let reduced = g.reduce_based(&five);
        assert_eq!(reduced.len(), 3, "five of eight letters shrink to three");
        let expected = Word::from_letters(relator.letters()[5..].to_vec()).invert();
        assert_eq!(reduced, expected, "replacement is the inverse complement");
        assert!(g.is_trivial(&relator));
    }

    #[test]
    fn reduce_is_idempotent_across_backends() {
        let cases: &[(&str, &[usize], &str)] = &[
            ("abAB", &[], "abaabbBA"),
            ("abaB", &[], "abab"),
            ("aabb", &[], "abba"),
            ("abABcdCD", &[], "abABcdC"),
            ("abac", &[1, 3], "aaA"),
            ("aa", &[], "aaa"),
        ];
        for &(schema, punctures, word) in cases {
            let g = group(schema, punctures);
            let once = g.reduce_based(&wd(&g, word));
            assert_eq!(
                once,
                g.reduce_based(&once),
                "reduce must be idempotent on {word} over {schema}"
            );
        }
    }

    #[test]
    fn torus_conjugacy_is_exponent_equality() {
        let g = group("abAB", &[]);
        let yes = g.conjugate_and_witness(&wd(&g, "ab"), &wd(&g, "ba"));
        assert!(yes.is_yes(), "ab and ba are conjugate on the torus");
        assert_eq!(
            g.conjugate_and_witness(&wd(&g, "a"), &wd(&g, "b")),
            Conjugacy::No
        );
    }

    #[test]
    fn free_conjugacy_returns_a_checked_witness() {
        let g = group("abABe", &[4]);
        let u = wd(&g, "abA");
        let v = wd(&g, "BabAb").free_reduce();
        match g.conjugate_and_witness(&u, &v) {
            Conjugacy::Yes { witness } => {
                let lhs = witness.concat(&v).concat(&witness.invert());
                assert!(
                    g.equal_based(&lhs, &u),
                    "witness must conjugate v to u, got {}",
                    g.schema().display_word(&witness)
                );
            }
            other => panic!("expected conjugate words, got {other:?}"),
        }
        assert_eq!(
            g.conjugate_and_witness(&wd(&g, "a"), &wd(&g, "A")),
            Conjugacy::No,
            "a and a⁻¹ are not conjugate in a free group"
        );
    }

    #[test]
    fn hyperbolic_conjugacy_finds_rotation_witnesses() {
        let g = group("abABcdCD", &[]);
        let u = wd(&g, "acd");
        let conj = wd(&g, "b").concat(&u).concat(&wd(&g, "B"));
        match g.conjugate_and_witness(&u, &conj) {
            Conjugacy::Yes { witness } => {
                let lhs = witness.concat(&conj).concat(&witness.invert());
                assert!(g.equal_based(&lhs, &u), "returned witness fails to verify");
            }
            other => panic!("expected conjugacy, got {other:?}"),
        }
        assert_eq!(
            g.conjugate_and_witness(&wd(&g, "a"), &wd(&g, "c")),
            Conjugacy::No
        );
    }

    #[test]
    fn klein_normal_forms_follow_the_glide_rule() {
        let g = group("abaB", &[]);
        // b a = a b⁻¹ in the crossing convention: a is the glide.
        assert!(g.equal_based(&wd(&g, "ba"), &wd(&g, "aB")));
        assert!(g.is_trivial(&wd(&g, "abAb")));
        // Conjugation by the glide inverts the translation.
        let conj = g.conjugate_and_witness(&wd(&g, "b"), &wd(&g, "B"));
        assert!(conj.is_yes(), "t and t⁻¹ are conjugate via the glide");
        if let Conjugacy::Yes { witness } = conj {
            let lhs = witness.concat(&wd(&g, "B")).concat(&witness.invert());
            assert!(g.equal_based(&lhs, &wd(&g, "b")));
        }
        assert_eq!(
            g.conjugate_and_witness(&wd(&g, "bb"), &wd(&g, "b")),
            Conjugacy::No
        );
    }

    #[test]
    fn klein_squares_schema_matches_the_glide_translation_model() {
        let g = group("aabb", &[]);
        let relator = g.schema().relators()[0].clone();
        assert!(g.is_trivial(&relator));
        // a² commutes with everything (it is central).
        let central = wd(&g, "aa");
        for other in ["a", "b", "ab", "ba"] {
            let o = wd(&g, other);
            assert!(
                g.equal_based(&central.concat(&o), &o.concat(&central)),
                "a² must be central; failed against {other}"
            );
        }
    }

    #[test]
    fn primitive_roots_match_expected_examples() {
        let torus = group("abAB", &[]);
        let (root, n) = torus.primitive_root(&wd(&torus, "aabb")).unwrap();
        assert_eq!(torus.schema().display_word(root.word()), "ab");
        assert_eq!(n, 2);

        let annulus = group("abAc", &[1, 3]);
        let (root, n) = annulus.primitive_root(&wd(&annulus, "aaa")).unwrap();
        assert_eq!(annulus.schema().display_word(root.word()), "a");
        assert_eq!(n, 3);

        let moebius = group("abac", &[1, 3]);
        let (root, n) = moebius.primitive_root(&wd(&moebius, "aa")).unwrap();
        assert_eq!(moebius.schema().display_word(root.word()), "a");
        assert_eq!(n, 2);
        assert!(
            moebius.framing_ambiguous(&wd(&moebius, "aa")).unwrap(),
            "the double of the core circle has an orientation-reversing root"
        );
    }

    #[test]
    fn framing_ambiguity_follows_the_root_character() {
        let klein = group("abaB", &[]);
        assert!(
            !klein.framing_ambiguous(&wd(&klein, "b")).unwrap(),
            "the fiber class has an orientation-preserving root"
        );
        assert!(klein.framing_ambiguous(&wd(&klein, "a")).unwrap());
        assert!(
            klein.framing_ambiguous(&wd(&klein, "aa")).unwrap(),
            "even glides still admit orientation-reversing roots"
        );
        assert!(!klein.framing_ambiguous(&wd(&klein, "bb")).unwrap());

        let torus = group("abAB", &[]);
        for text in ["a", "ab", "aabb"] {
            assert!(
                !torus.framing_ambiguous(&wd(&torus, text)).unwrap(),
                "orientable surfaces never flip framings ({text})"
            );
        }

        let genus2 = group("abABcdCD", &[]);
        assert!(!genus2.framing_ambiguous(&wd(&genus2, "abc")).unwrap());
    }

    #[test]
    fn roots_are_primitive_and_characters_factor() {
        let cases: &[(&str, &[usize], &str)] = &[
            ("abAB", &[], "aabbaabb"),
            ("abaB", &[], "aa"),
            ("abaB", &[], "bb"),
            ("abaB", &[], "abab"),
            ("aabb", &[], "abab"),
            ("abac", &[1, 3], "aaaa"),
            ("abABcdCD", &[], "abab"),
            ("abABe", &[4], "abab"),
        ];
        for &(schema, punctures, word) in cases {
            let g = group(schema, punctures);
            let w = wd(&g, word);
            let (root, n) = g.primitive_root(&w).expect("nontrivial word");
            let (_, again) = g.primitive_root(root.word()).expect("root nontrivial");
            assert_eq!(again, 1, "root of {word} over {schema} must be primitive");
            let power = root.word().repeated(n as usize);
            assert!(
                g.conjugate_and_witness(&w, &power).is_yes(),
                "rootⁿ must be conjugate to {word} over {schema}"
            );
            let char_w = g.schema().orientation_character(&w);
            let char_root = g.schema().orientation_character(root.word());
            let expected = if n % 2 == 0 { 1 } else { char_root };
            assert_eq!(char_w, expected, "character must factor through the root");
        }
    }

    #[test]
    fn unsupported_schemas_are_refused() {
        let hexagonal_torus = SurfaceSchema::parse("abcABC", &[]).unwrap();
        assert!(matches!(
            SurfaceGroup::new(&hexagonal_torus),
            Err(Error::UnsupportedSchema { .. })
        ));
        let folded = SurfaceSchema::parse("aAb", &[2]).unwrap();
        // Disk kind: trivial group is fine even with an interior cone vertex.
        let g = SurfaceGroup::new(&folded).expect("disk backend");
        assert!(g.is_trivial(&folded.parse_word("a").unwrap()));
    }

    #[test]
    fn trivial_word_roots_error_out() {
        let g = group("abAB", &[]);
        assert!(matches!(
            g.primitive_root(&wd(&g, "abAB")),
            Err(Error::NullHomotopicWord)
        ));
        let sphere = group("aA", &[]);
        assert!(matches!(
            sphere.primitive_root(&wd(&sphere, "a")),
            Err(Error::NullHomotopicWord)
        ));
    }

    #[test]
    fn projective_plane_words_live_in_z2() {
        let g = group("aa", &[]);
        assert!(g.is_trivial(&wd(&g, "aa")));
        assert!(!g.is_trivial(&wd(&g, "aaa")));
        assert!(g
            .conjugate_and_witness(&wd(&g, "a"), &wd(&g, "aaa"))
            .is_yes());
    }
}
