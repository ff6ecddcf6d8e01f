//! Brute-force oracles for the word-level operations.
//!
//! Conjugacy verdicts are checked two ways: every `Yes` witness is verified
//! through the word problem, and every `No` is compared against an exhaustive
//! search over conjugators from a bounded Cayley ball. The word problem
//! itself rests on exact normal forms or Dehn reduction with a validated
//! small-cancellation relator, so it is safe to use as ground truth here.

use regho_core::group::{Conjugacy, SurfaceGroup};
use regho_core::schema::SurfaceSchema;
use regho_core::word::{Letter, Word};

/// All freely reduced words of length at most `max_len` over `gens` letters.
fn words_up_to(gens: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for gen in 0..gens {
                for inv in [false, true] {
                    let letter = Letter::new(gen, inv);
                    if w.letters().last().is_some_and(|l| l.is_inverse_of(letter)) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(letter);
                    next.push(w2);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Smallest reduced form reachable by conjugating with ball elements; equal
/// signatures certify conjugacy, distinct signatures certify nothing beyond
/// the ball radius.
fn ball_signature(group: &SurfaceGroup, ball: &[Word], w: &Word) -> (usize, String) {
    ball.iter()
        .map(|c| {
            let conj = c.concat(w).concat(&c.invert());
            let reduced = group.reduce_based(&conj);
            (reduced.len(), group.schema().display_word(&reduced))
        })
        .min()
        .expect("ball is nonempty")
}

#[test]
fn conjugacy_agrees_with_bounded_cayley_ball_oracle() {
    let cases: &[(&str, &[usize], usize)] = &[
        ("abAB", &[], 2),
        ("abaB", &[], 2),
        ("aabb", &[], 2),
        ("abac", &[1, 3], 1),
        ("aa", &[], 1),
        ("abABcdCD", &[], 2),
        ("aabbcc", &[], 2),
    ];
    for &(schema_word, punctures, sampled_gens) in cases {
        let schema = SurfaceSchema::parse(schema_word, punctures).expect("schema parses");
        let group = SurfaceGroup::new(&schema).expect("backend available");
        let mut corpus = words_up_to(sampled_gens, 3);
        let extras: &[&str] = match schema.generator_count() {
            3 => &["bc", "abc", "cB"],
            n if n >= 4 => &["cd", "acd", "cdC"],
            _ => &[],
        };
        for extra in extras {
            corpus.push(schema.parse_word(extra).expect("extra word parses"));
        }
        let ball = words_up_to(schema.generator_count(), 3);
        let signatures: Vec<(usize, String)> = corpus
            .iter()
            .map(|w| ball_signature(&group, &ball, w))
            .collect();
        for (i, u) in corpus.iter().enumerate() {
            for (j, v) in corpus.iter().enumerate() {
                match group.conjugate_and_witness(u, v) {
                    Conjugacy::Yes { witness } => {
                        let lhs = witness.concat(v).concat(&witness.invert());
                        assert!(
                            group.equal_based(&lhs, u),
                            "witness {} fails for u={} v={} over {}",
                            schema.display_word(&witness),
                            schema.display_word(u),
                            schema.display_word(v),
                            schema_word
                        );
                    }
                    Conjugacy::No | Conjugacy::Exhausted => {
                        assert_ne!(
                            signatures[i],
                            signatures[j],
                            "oracle found a conjugator the backend missed: u={} v={} over {}",
                            schema.display_word(u),
                            schema.display_word(v),
                            schema_word
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn dehn_reduced_words_contain_no_long_relator_subwords() {
    for (schema_word, punctures) in [("abABcdCD", [].as_slice()), ("aabbcc", &[])] {
        let schema = SurfaceSchema::parse(schema_word, punctures).expect("schema parses");
        let group = SurfaceGroup::new(&schema).expect("hyperbolic backend");
        let relator = schema.relators()[0].clone();
        let half = relator.len() / 2;
        let mut symmetrized = Vec::new();
        for base in [relator.clone(), relator.invert()] {
            for k in 0..base.len() {
                symmetrized.push(base.rotated(k));
            }
        }
        for w in words_up_to(schema.generator_count(), 4) {
            let reduced = group.reduce_based(&w);
            let letters = reduced.letters();
            for start in 0..letters.len() {
                for rel in &symmetrized {
                    let common = letters[start..]
                        .iter()
                        .zip(rel.letters())
                        .take_while(|(a, b)| a == b)
                        .count();
                    assert!(
                        common <= half,
                        "reduced form {} of {} keeps a relator run of {common} letters",
                        schema.display_word(&reduced),
                        schema.display_word(&w)
                    );
                }
            }
        }
    }
}

#[test]
fn primitive_roots_survive_conjugated_powers() {
    let cases: &[(&str, &[usize], &str, usize)] = &[
        ("abAB", &[], "ab", 3),
        ("abaB", &[], "ab", 2),
        ("abac", &[1, 3], "a", 4),
        ("abABcdCD", &[], "ab", 2),
        ("aabbcc", &[], "ab", 2),
    ];
    for &(schema_word, punctures, seed, n) in cases {
        let schema = SurfaceSchema::parse(schema_word, punctures).expect("schema parses");
        let group = SurfaceGroup::new(&schema).expect("backend available");
        let seed_word = schema.parse_word(seed).expect("seed parses");
        let conjugator = schema.parse_word("a").expect("conjugator parses");
        let power = conjugator
            .concat(&seed_word.repeated(n))
            .concat(&conjugator.invert());
        let (root, found_n) = group.primitive_root(&power).expect("power is essential");
        assert_eq!(
            found_n as usize % n,
            0,
            "conjugated {n}-th power of {seed} over {schema_word} reported multiplicity {found_n}"
        );
        let rebuilt = root.word().repeated(found_n as usize);
        assert!(
            group.conjugate_and_witness(&power, &rebuilt).is_yes(),
            "root^n must recover the class of the input over {schema_word}"
        );
    }
}
