//! Acceptance suite: one test per criterion, each printing its own
//! pass/fail line. Everything is golden-trace or property-based; all
//! tolerances are exact.

use std::collections::BTreeSet;
use std::time::Instant;

use jassology::encode::{encode, row_linked, Item};
use jassology::enumerate::enumerate_valid_words;
use jassology::geo::{build_ladder, decode, LadderRow};
use jassology::map::RootedMap;
use jassology::seq::Stratino;
use jassology::tree::{dallajascar_of_simple_word, validate_simple_word, Bracket, SimpleWord};
use jassology::word::{tokenize, validate};

const EXAMPLE_WORD: &str = "zc+ mr+ sn+ tg+ ba ca tg- sn- tc+ ba ln+ sn+ sn- tc+ sn+ ba \
                            sn- ch ca tc- ln- sn+ ln+ cu ch ln- ca sn- ch tc- cu ch mr- zc-";
const THETA_WORD: &str = "zc+ mr+ sn+ sn- ch mr- zc-";

fn example11() -> RootedMap {
    RootedMap::parse(include_str!("data/example11.map")).unwrap()
}

fn theta() -> RootedMap {
    RootedMap::parse(include_str!("data/theta.map")).unwrap()
}

fn tetrahedron() -> RootedMap {
    RootedMap::parse(
        "faces A B C D\nborder A: B D C\nborder B: A C D\nborder C: A D B\nborder D: A B C\nroot A B\n",
    )
    .unwrap()
}

fn st(s: &str) -> Stratino {
    s.parse().unwrap()
}

fn row_string(map: &RootedMap, items: &[Item]) -> String {
    items
        .iter()
        .map(|i| match i {
            Item::Cell(c) => map.face_name(*c).to_string(),
            Item::Cu => "cu".into(),
            Item::Ch => "ch".into(),
            Item::Ba => "ba".into(),
            Item::Ca => "ca".into(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Criterion 1: encoding the 11-face example reproduces the layer
/// partition, the component anchors, the row table, the coloring, the visit
/// order and the exact 34-token word with its pair trace.
#[test]
fn criterion_1_encoder_golden_trace() {
    let start = Instant::now();
    let m = example11();
    let enc = encode(&m).unwrap();
    let idx = |s: &str| m.face_index(s).unwrap();
    let names = |xs: &[usize]| -> Vec<&str> { xs.iter().map(|&x| m.face_name(x)).collect() };

    // Layer partition.
    assert_eq!(names(&enc.layering.levels[0]), ["a"]);
    assert_eq!(names(&enc.layering.levels[1]), ["b", "c", "f", "g", "j"]);
    assert_eq!(names(&enc.layering.levels[2]), ["d", "e", "h", "i", "k"]);

    // Component anchors.
    let rov = |s: &str| enc.rov_of_cell(idx(s));
    assert_eq!(rov("k").zouc, Some(idx("k")));
    assert_eq!(rov("k").baou, Some((idx("c"), idx("g"))));
    assert_eq!(rov("k").caouly, Some((idx("g"), idx("c"))));
    assert_eq!(rov("k").fan.as_deref(), Some(&[][..]));
    assert_eq!(rov("d").zouc, Some(idx("d")));
    assert_eq!(rov("d").baou, Some((idx("b"), idx("c"))));
    assert_eq!(rov("d").caouly, Some((idx("f"), idx("b"))));
    assert_eq!(rov("d").fan.as_deref(), Some(&[idx("g"), idx("f")][..]));
    assert_eq!(rov("i").zouc, Some(idx("i")));
    assert_eq!(rov("i").baou, Some((idx("g"), idx("j"))));
    assert_eq!(rov("i").caouly, Some((idx("j"), idx("f"))));
    assert_eq!(rov("i").fan.as_deref(), Some(&[][..]));

    // Row table.
    let row = |k: &str| row_string(&m, &enc.rows[&st(k)]);
    assert_eq!(row(""), "a");
    assert_eq!(row("1"), "b");
    assert_eq!(row("1#,1"), "d cu");
    assert_eq!(row("1#,2"), "e ch");
    assert_eq!(row("2"), "c g f ch");
    assert_eq!(row("2,1"), "k");
    assert_eq!(row("2#"), "ba ca");
    assert_eq!(row("2#,1"), "i cu");
    assert_eq!(row("2#,2"), "h ch");
    assert_eq!(row("3"), "j ch");
    assert_eq!(enc.rows.len(), 10);

    // Coloring classes.
    let color = |s: &str| enc.colors[idx(s)];
    assert!(["b", "j"].iter().all(|f| color(f) == 1));
    assert!(["c", "g", "f"].iter().all(|f| color(f) == 3));
    assert!(["a", "d", "k", "i"].iter().all(|f| color(f) == 0));
    assert!(["e", "h"].iter().all(|f| color(f) == 2));

    // Visit order and word.
    assert_eq!(
        names(&enc.visit_order),
        ["a", "b", "c", "k", "d", "g", "j", "i", "h", "e", "f"]
    );
    assert_eq!(enc.word, tokenize(EXAMPLE_WORD).unwrap());
    let openers: Vec<usize> = (1..=enc.word.len())
        .filter(|&i| enc.word.at(i).is_opener())
        .collect();
    assert_eq!(openers, [1, 2, 3, 4, 9, 11, 12, 14, 15, 22, 23]);

    // Pair trace of the emitted word.
    let analysis = validate(&enc.word).unwrap();
    let closer = |a: usize| analysis.closer_of(a).unwrap();
    assert_eq!(closer(1), 34);
    assert_eq!(closer(2), 33);
    assert_eq!(closer(3), 8);
    assert_eq!(closer(4), 7);
    assert_eq!(closer(9), 30);
    assert_eq!(closer(11), 21);
    assert_eq!(closer(12), 13);

    assert!(start.elapsed().as_secs_f64() < 1.0, "criterion 1 over 1 s");
    println!("criterion 1 (encoder golden trace): PASS");
}

/// Criterion 2: the emitted word validates and reproduces the full
/// word-side tables.
#[test]
fn criterion_2_validator_golden_trace() {
    let a = validate(&tokenize(EXAMPLE_WORD).unwrap()).unwrap();
    assert_eq!(
        a.e_of_m,
        vec![1, 2, 3, 4, 5, 6, 9, 10, 11, 12, 14, 15, 16, 18, 19, 22, 23, 24, 25, 27, 29, 31, 32]
    );
    let sig = [
        (1, ""), (2, "1"), (3, "2"), (4, "2,1"), (5, "2#"), (6, "2#"),
        (9, "1#,1"), (10, "2"), (11, "2"), (12, "3"), (14, "2#,1"),
        (15, "2#,2"), (16, "3"), (18, "2#,2"), (19, "3"), (22, "1#,2"),
        (23, "2"), (24, "2#,1"), (25, "3"), (27, "2"), (29, "1#,2"),
        (31, "1#,1"), (32, "2"),
    ];
    assert_eq!(sig.len(), 23);
    for (pos, s) in sig {
        assert_eq!(a.sigma[&pos], st(s), "sigma({pos})");
    }
    assert_eq!(a.rows[&st("2")], vec![3, 10, 11, 23, 27, 32]);
    assert_eq!(a.rows[&st("3")], vec![12, 16, 19, 25]);
    assert_eq!(a.rows[&st("1#,1")], vec![9, 31]);
    assert_eq!(a.rows[&st("1#,2")], vec![22, 29]);
    assert_eq!(a.rows[&st("2,1")], vec![4]);
    assert_eq!(a.rows[&st("2#")], vec![5, 6]);
    assert_eq!(a.rows[&st("2#,1")], vec![14, 24]);
    assert_eq!(a.rows[&st("2#,2")], vec![15, 18]);
    let cg: BTreeSet<usize> = [2, 3, 4, 9, 12, 14, 15, 22].into_iter().collect();
    let cd: BTreeSet<usize> = [2, 4, 9, 12, 14, 15, 22, 23].into_iter().collect();
    assert_eq!(a.cg, cg);
    assert_eq!(a.cd, cd);
    assert_eq!(a.fans[&9], vec![10, 11, 23, 27]);
    assert_eq!(a.zm, [14].into_iter().collect::<BTreeSet<usize>>());
    // The four stratajo factors.
    assert_eq!(a.stratajos[&st("2")], vec![vec![3, 10, 11, 23, 27, 32]]);
    assert_eq!(a.stratajos[&st("3")], vec![vec![12, 16, 19, 25]]);
    assert_eq!(a.stratajos[&st("1#,2")], vec![vec![22, 29]]);
    assert_eq!(a.stratajos[&st("2#,2")], vec![vec![15, 18]]);
    println!("criterion 2 (validator golden trace): PASS");
}

/// Criterion 3: decoding the word rebuilds the 14-row ladder, the four
/// curves, the four segments, both transversals, and a map whose extended
/// borders equal the source map's under the visit renaming.
#[test]
fn criterion_3_decoder_golden_trace() {
    let a = validate(&tokenize(EXAMPLE_WORD).unwrap()).unwrap();
    let ladder = build_ladder(&a).unwrap();
    assert_eq!(ladder.rows.len(), 14);
    let expect_rows = [
        "", "1", "1#,1", "1#,2", "-", "2", "2,1", "-", "2#", "2#,1", "2#,2", "-", "3", "-",
    ];
    for (row, want) in ladder.rows.iter().zip(expect_rows) {
        match row {
            LadderRow::Stratino(x) => assert_eq!(x.to_string(), want),
            LadderRow::Blank { .. } => assert_eq!(want, "-"),
        }
    }
    let gm = decode(&a).unwrap();
    let curve = |anchor: usize| {
        gm.arrangement
            .curves
            .iter()
            .find(|c| c.anchor == anchor)
            .unwrap()
    };
    assert_eq!(curve(2).pts, vec![(1, 1), (1, 13), (24, 13), (24, 1), (1, 1)]);
    assert_eq!(
        curve(4).pts,
        vec![(3, 6), (3, 7), (4, 7), (4, 8), (5, 8), (5, 7), (6, 7), (6, 6), (3, 6)]
    );
    assert_eq!(
        curve(9).pts,
        vec![(7, 2), (7, 4), (8, 4), (8, 5), (20, 5), (20, 4), (22, 4), (22, 2), (7, 2)]
    );
    assert_eq!(
        curve(14).pts,
        vec![
            (11, 9),
            (11, 11),
            (13, 11),
            (13, 12),
            (15, 12),
            (15, 11),
            (18, 11),
            (18, 9),
            (11, 9)
        ]
    );
    let seg = |anchor: usize| {
        gm.arrangement
            .segments
            .iter()
            .find(|s| s.anchor == anchor)
            .unwrap()
    };
    assert_eq!(seg(3).pts, vec![(2, 13), (2, 5), (23, 5), (23, 13)]);
    assert_eq!(seg(12).pts, vec![(10, 13), (10, 12), (19, 12), (19, 13)]);
    assert_eq!(seg(22).pts, vec![(16, 5), (16, 3), (21, 3), (21, 4)]);
    assert_eq!(seg(15).pts, vec![(12, 11), (12, 10), (14, 10), (14, 12)]);
    let tr = |opener: usize| {
        gm.arrangement
            .transversals
            .iter()
            .find(|t| t.opener == opener)
            .unwrap()
    };
    assert_eq!(tr(11).pts, vec![(9, 5), (9, 8), (4, 8), (4, 13)]);
    assert_eq!(tr(23).pts, vec![(17, 5), (17, 9)]);
    assert_eq!(
        gm.arrangement.lambda,
        vec![(23, 13), (24, 13), (24, 1), (1, 1), (1, 13), (2, 13)]
    );

    // Extended borders under the visit renaming; the roots match anchored,
    // every other face up to rotation of its anchor.
    let renaming = ["a", "b", "c", "k", "d", "g", "j", "i", "h", "e", "f"];
    let source = example11();
    for (p, name) in renaming.iter().enumerate() {
        let got: Vec<&str> = gm.map.border(p).iter().map(|&x| renaming[x]).collect();
        let src = source.face_index(name).unwrap();
        let want: Vec<&str> = source
            .border(src)
            .iter()
            .map(|&x| source.face_name(x))
            .collect();
        assert_eq!(got.len(), want.len(), "face {name}");
        let matches = (0..want.len())
            .any(|r| (0..want.len()).all(|i| got[i] == want[(i + r) % want.len()]));
        assert!(matches, "face {name}: {got:?} vs {want:?}");
        if p < 2 {
            assert_eq!(got, want, "root face {name}");
        }
    }
    assert!(source.equivalent(&gm.map).unwrap());
    println!("criterion 3 (decoder golden trace): PASS");
}

/// Criterion 4: decode-then-encode is the identity on the example word, the
/// theta word, and every enumerated valid word with at most 6 pairs (more
/// than 100 of them); encode-then-decode lands in the same equivalence
/// class for every test map. Under 60 seconds total.
#[test]
fn criterion_4_roundtrip_identities() {
    let start = Instant::now();
    let mut words = vec![
        tokenize(EXAMPLE_WORD).unwrap(),
        tokenize(THETA_WORD).unwrap(),
    ];
    let enumerated = enumerate_valid_words(6);
    assert!(
        enumerated.len() >= 100,
        "need at least 100 words, got {}",
        enumerated.len()
    );
    words.extend(enumerated);
    for word in &words {
        let analysis = validate(word).expect("corpus words are valid");
        let gm = decode(&analysis).expect("valid words decode");
        let enc = encode(&gm.map).expect("decoded maps encode");
        assert_eq!(&enc.word, word, "decode/encode identity");
    }
    // Map-side round trip through the word.
    for map in [example11(), theta(), tetrahedron()] {
        let enc = encode(&map).unwrap();
        let analysis = validate(&enc.word).unwrap();
        let gm = decode(&analysis).unwrap();
        assert!(map.equivalent(&gm.map).unwrap(), "map round trip");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 4 took {elapsed:?}");
    println!(
        "criterion 4 (round-trip identities, {} words, {elapsed:?}): PASS",
        words.len()
    );
}

/// Criterion 5: over a corpus of small maps (with relabelings and
/// re-anchored rotations), word equality and the backtracking oracle agree
/// on every pair.
#[test]
fn criterion_5_equivalence_oracle_agreement() {
    // Corpus: all decoded maps with up to 5 pairs, plus a relabeled and
    // rotation-re-anchored copy of each of the first ten.
    let mut corpus: Vec<RootedMap> = Vec::new();
    for word in enumerate_valid_words(5) {
        let analysis = validate(&word).unwrap();
        corpus.push(decode(&analysis).unwrap().map);
    }
    let base = corpus.len();
    for k in 0..base.min(10) {
        corpus.push(relabel_and_rotate(&corpus[k], k));
    }
    assert!(corpus.len() >= 20, "corpus has {} maps", corpus.len());
    assert!(corpus.iter().all(|m| m.face_count() <= 8));
    let words: Vec<_> = corpus.iter().map(|m| encode(m).unwrap().word).collect();
    let mut checked = 0;
    for i in 0..corpus.len() {
        for j in 0..i {
            let by_word = words[i] == words[j];
            let by_oracle = corpus[i].equivalent(&corpus[j]).unwrap();
            assert_eq!(by_word, by_oracle, "maps {j} and {i} disagree");
            checked += 1;
        }
    }
    // The synthetic copies must land equivalent to their originals.
    for k in 0..base.min(10) {
        assert_eq!(words[base + k], words[k]);
    }
    println!("criterion 5 (equivalence oracle agreement, {checked} pairs): PASS");
}

fn relabel_and_rotate(map: &RootedMap, salt: usize) -> RootedMap {
    let name = |i: usize| format!("f{}_{salt}", i);
    let faces: Vec<String> = (0..map.face_count()).map(name).collect();
    let mut borders = Vec::new();
    for i in 0..map.face_count() {
        let mut b: Vec<String> = map.border(i).iter().map(|&x| name(x)).collect();
        if i != map.root_neg() && i != map.root_pos() && b.len() > 1 {
            let k = (salt + i) % b.len();
            b.rotate_left(k);
        }
        borders.push((name(i), b));
    }
    RootedMap::new(
        faces,
        borders,
        &name(map.root_neg()),
        &name(map.root_pos()),
    )
    .unwrap()
}

/// Criterion 6: for n up to 6, valid simple words with n openers and
/// ordered trees with n nodes agree in number, and the two conversions
/// invert each other on every instance.
#[test]
fn criterion_6_simple_word_bijection() {
    // Catalan numbers for trees with 1..=6 nodes.
    let expect = [1usize, 1, 2, 5, 14, 42];
    for n in 1..=6usize {
        let mut count = 0;
        for mask in 0u32..(1 << (2 * n)) {
            let chars: Vec<Bracket> = (0..2 * n)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        Bracket::Open
                    } else {
                        Bracket::Close
                    }
                })
                .collect();
            let w = SimpleWord(chars);
            if validate_simple_word(&w).is_err() {
                continue;
            }
            count += 1;
            let tree = dallajascar_of_simple_word(&w).unwrap();
            assert!(tree.validate().is_empty());
            assert_eq!(tree.simple_word(), w, "word -> tree -> word");
            let again = dallajascar_of_simple_word(&tree.simple_word()).unwrap();
            assert!(tree.equivalent(&again), "tree -> word -> tree");
        }
        assert_eq!(count, expect[n - 1], "openers = {n}");
    }
    println!("criterion 6 (simple-word bijection): PASS");
}

/// Criterion 7: the counting identities hold on every accepted map.
#[test]
fn criterion_7_counting_identities() {
    let mut maps = vec![example11(), theta(), tetrahedron()];
    for word in enumerate_valid_words(5) {
        maps.push(decode(&validate(&word).unwrap()).unwrap().map);
    }
    for map in &maps {
        let report = map.validate();
        assert!(report.is_ok());
        let f = report.faces;
        let total: usize = (0..f).map(|e| map.border(e).len()).sum();
        assert_eq!(report.edges, total / 2);
        assert_eq!(report.vertices, total / 3);
        assert_eq!(report.edges, 3 * (f - 2));
        assert_eq!(
            report.faces as i64 - report.edges as i64 + report.vertices as i64,
            2
        );
        let enc = encode(map).unwrap();
        let pairs = enc.word.tokens.iter().filter(|t| t.is_opener()).count();
        assert_eq!(pairs, f, "binomial pairs equal the face count");
    }
    let fig = example11().validate();
    assert_eq!((fig.faces, fig.edges, fig.vertices), (11, 27, 18));
    println!("criterion 7 (counting identities, {} maps): PASS", maps.len());
}

/// Criterion 8: on every encoded test map, two same-colored faces touch
/// exactly when they sit next to each other in one row with no break mark
/// between them.
#[test]
fn criterion_8_coloring_contact_property() {
    let mut maps = vec![example11(), theta(), tetrahedron()];
    for word in enumerate_valid_words(5) {
        maps.push(decode(&validate(&word).unwrap()).unwrap().map);
    }
    let mut checked = 0;
    for map in &maps {
        let enc = encode(map).unwrap();
        for a in 0..map.face_count() {
            for b in 0..a {
                if enc.colors[a] == enc.colors[b] {
                    assert_eq!(
                        map.adjacent(a, b),
                        row_linked(&enc.rows, a, b),
                        "{} / {} in some map",
                        map.face_name(a),
                        map.face_name(b)
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 8 (coloring contact property, {checked} pairs): PASS");
}
