//! Cross-check: every census map must encode to a valid word, and the word
//! set must equal the enumerated valid-word set.

use jassology::map::RootedMap;
use std::collections::BTreeSet;

fn faces(mate: &[usize]) -> (usize, Vec<usize>) {
    let n = mate.len();
    let sigma = |d: usize| d - d % 3 + (d + 1) % 3;
    let mut face_of = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if face_of[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        loop {
            face_of[d] = count;
            d = sigma(mate[d]);
            if d == start {
                break;
            }
        }
        count += 1;
    }
    (count, face_of)
}

fn to_map(mate: &[usize]) -> Option<RootedMap> {
    let (f, face_of) = faces(mate);
    let v = mate.len() / 3;
    let e = mate.len() / 2;
    if v + f != e + 2 {
        return None;
    }
    if (0..mate.len()).any(|d| face_of[d] == face_of[mate[d]]) {
        return None;
    }
    let sigma = |d: usize| d - d % 3 + (d + 1) % 3;
    // Border of the face containing dart d0, walking its orbit from d0.
    let border_from = |d0: usize| -> Vec<usize> {
        let mut out = Vec::new();
        let mut d = d0;
        loop {
            out.push(face_of[mate[d]]);
            d = sigma(mate[d]);
            if d == d0 {
                break;
            }
        }
        out
    };
    let neg = face_of[0];
    let pos = face_of[mate[0]];
    if neg == pos {
        return None;
    }
    let names: Vec<String> = (0..f).map(|i| format!("m{i}")).collect();
    let mut borders: Vec<(String, Vec<String>)> = Vec::new();
    let mut done = vec![false; f];
    // Anchor the two root faces at the root edge.
    for (face, anchor) in [(neg, 0usize), (pos, mate[0])] {
        borders.push((
            names[face].clone(),
            border_from(anchor).iter().map(|&x| names[x].clone()).collect(),
        ));
        done[face] = true;
    }
    for (d, &face) in face_of.iter().enumerate() {
        if !done[face] {
            done[face] = true;
            borders.push((
                names[face].clone(),
                border_from(d).iter().map(|&x| names[x].clone()).collect(),
            ));
        }
    }
    borders.sort_by(|a, b| a.0.cmp(&b.0));
    RootedMap::new(names.clone(), borders, &names[neg], &names[pos]).ok()
}

fn search(mate: &mut Vec<usize>, used: &mut usize, max_v: usize, out: &mut Vec<Vec<usize>>) {
    const FREE: usize = usize::MAX;
    let next = match mate.iter().position(|&m| m == FREE) {
        Some(d) => d,
        None => {
            if *used == max_v {
                out.push(mate.clone());
            }
            return;
        }
    };
    if *used < max_v {
        let w = 3 * *used;
        *used += 1;
        mate.extend([FREE, FREE, FREE]);
        mate[next] = w;
        mate[w] = next;
        search(mate, used, max_v, out);
        mate[next] = FREE;
        mate.truncate(w);
        *used -= 1;
    }
    for e in next + 1..mate.len() {
        if mate[e] == usize::MAX {
            mate[next] = e;
            mate[e] = next;
            search(mate, used, max_v, out);
            mate[next] = usize::MAX;
            mate[e] = usize::MAX;
        }
    }
}

fn main() {
    let max_pairs: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let enumerated: BTreeSet<String> = jassology::enumerate::enumerate_valid_words(max_pairs)
        .into_iter()
        .map(|w| w.to_string())
        .collect();
    let mut census_words: BTreeSet<String> = BTreeSet::new();
    let mut failures = 0;
    for v in (2..=2 * (max_pairs - 2)).step_by(2) {
        let mut mate = vec![usize::MAX; 3];
        let mut used = 1;
        let mut glued = Vec::new();
        search(&mut mate, &mut used, v, &mut glued);
        for mate in &glued {
            let Some(map) = to_map(mate) else { continue };
            match jassology::encode::encode(&map) {
                Ok(enc) => {
                    let wstr = enc.word.to_string();
                    if !enumerated.contains(&wstr) {
                        println!("WORD NOT ENUMERATED: {wstr}\nmap:\n{map}");
                        failures += 1;
                    }
                    if jassology::word::validate(&enc.word).is_err() {
                        println!("WORD INVALID: {wstr}");
                        failures += 1;
                    }
                    census_words.insert(wstr);
                }
                Err(e) => {
                    println!("ENCODE FAIL ({e}):\n{map}");
                    failures += 1;
                }
            }
            if failures > 4 {
                return;
            }
        }
    }
    println!(
        "census words: {}, enumerated: {}",
        census_words.len(),
        enumerated.len()
    );
    for w in enumerated.difference(&census_words) {
        println!("ENUMERATED BUT NOT IN CENSUS: {w}");
    }
    for w in census_words.difference(&enumerated) {
        println!("IN CENSUS BUT NOT ENUMERATED: {w}");
    }
}
