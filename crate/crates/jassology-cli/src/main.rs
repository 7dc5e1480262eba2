//! Command-line surface for the map/word codec.
//!
//! Exit codes: 0 success, 1 semantic failure (invalid word, distinct maps,
//! round-trip mismatch), 2 input error (unreadable file, lexical or map
//! parse error, invalid map, bound exceeded), 3 internal-consistency
//! sentinel (must never fire).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use jassology::encode::{encode, Encoding, Item};
use jassology::enumerate::enumerate_valid_words;
use jassology::geo::{decode, geometry_dump, render_svg};
use jassology::map::RootedMap;
use jassology::word::{tokenize, validate, JassoWord, WordViolation};

#[derive(Parser)]
#[command(name = "jasso", version, about = "Codec between rooted cubic planar maps and words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a map file into its word.
    Encode {
        map_file: PathBuf,
        /// Also print the row table, the coloring and the visit order.
        #[arg(long)]
        report: bool,
        /// Write the word here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a token string against the four word rules.
    Validate { word_file: PathBuf },
    /// Decode a valid word into a map (and optionally a drawing).
    Decode {
        word_file: PathBuf,
        /// Write the map text here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write an SVG drawing of the geometric map.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Fill the SVG regions with the four-color classes.
        #[arg(long)]
        color: bool,
        /// Write the polyline geometry dump.
        #[arg(long)]
        geometry: Option<PathBuf>,
    },
    /// Decide equivalence of two maps by comparing their words.
    Equiv {
        map_a: PathBuf,
        map_b: PathBuf,
        /// Also run the backtracking oracle and cross-check.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the four-color class of every face of a map.
    Color { map_file: PathBuf },
    /// Check the two round-trip identities.
    Roundtrip {
        #[arg(long, value_enum)]
        mode: Mode,
        file: PathBuf,
    },
    /// Count all valid words with up to a given number of pairs.
    Enumerate {
        max_pairs: usize,
        /// Decode every word and verify the maps are pairwise distinct.
        #[arg(long)]
        check_injective: bool,
        /// Raise the safety bound on max_pairs.
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Decode then re-encode; the word must come back token for token.
    Word,
    /// Encode then decode; the map must come back equivalent.
    Map,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            eprintln!("{message}");
            code
        }
    };
    ExitCode::from(code)
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: &Path, content: &str) -> Result<(), Failure> {
    fs::write(path, content).map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))
}

fn load_map(path: &Path) -> Result<RootedMap, Failure> {
    let text = read(path)?;
    RootedMap::parse(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn load_word(path: &Path) -> Result<JassoWord, Failure> {
    let text = read(path)?;
    tokenize(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))
}

fn encode_map(path: &Path) -> Result<(RootedMap, Encoding), Failure> {
    let map = load_map(path)?;
    let enc = encode(&map).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    Ok((map, enc))
}

fn items_line(map: &RootedMap, items: &[Item]) -> String {
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

fn encode_report(map: &RootedMap, enc: &Encoding) -> String {
    let mut out = String::new();
    out.push_str(&format!("pairs {}\n", map.face_count()));
    let order: Vec<&str> = enc.visit_order.iter().map(|&e| map.face_name(e)).collect();
    out.push_str(&format!("visit-order {}\n", order.join(" ")));
    for (x, items) in &enc.rows {
        out.push_str(&format!("sigma {x}: {}\n", items_line(map, items)));
    }
    let mut names: Vec<&str> = (0..map.face_count()).map(|i| map.face_name(i)).collect();
    names.sort_unstable();
    for name in names {
        let idx = map.face_index(name).expect("own name");
        out.push_str(&format!("color {name} c{}\n", enc.colors[idx]));
    }
    out
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Encode { map_file, report, output } => {
            let (map, enc) = encode_map(&map_file)?;
            let word = enc.word.to_string();
            match output {
                Some(path) => write_out(&path, &format!("{word}\n"))?,
                None => println!("{word}"),
            }
            if report {
                print!("{}", encode_report(&map, &enc));
            }
            Ok(0)
        }
        Command::Validate { word_file } => {
            let word = load_word(&word_file)?;
            match validate(&word) {
                Ok(analysis) => {
                    println!("rule 1 (nesting): ok");
                    println!("rule 2 (stratojasses): ok");
                    println!("rule 3 (dallajascar): ok");
                    println!("rule 4 (lounafans): ok");
                    let monomials = analysis
                        .e_of_m
                        .iter()
                        .filter(|&&p| analysis.word.at(p).is_monomial())
                        .count();
                    println!(
                        "valid: pairs {}, monomials {}, length {}",
                        analysis.pair_count(),
                        monomials,
                        analysis.eta()
                    );
                    Ok(0)
                }
                Err(violation) => {
                    let passed = match &violation {
                        WordViolation::Rule1(_) => 0,
                        WordViolation::Rule2(_) => 1,
                        WordViolation::Rule3(_) => 2,
                        WordViolation::Rule4(_) => 3,
                        WordViolation::Internal(_) => 4,
                    };
                    for r in 1..=passed.min(4) {
                        let name = match r {
                            1 => "nesting",
                            2 => "stratojasses",
                            3 => "dallajascar",
                            _ => "lounafans",
                        };
                        println!("rule {r} ({name}): ok");
                    }
                    println!("invalid: {violation}");
                    if matches!(violation, WordViolation::Internal(_)) {
                        Ok(3)
                    } else {
                        Ok(1)
                    }
                }
            }
        }
        Command::Decode { word_file, output, svg, color, geometry } => {
            let word = load_word(&word_file)?;
            let analysis =
                validate(&word).map_err(|e| fail(1, format!("invalid word: {e}")))?;
            let gm = decode(&analysis).map_err(|e| fail(3, format!("decode failed: {e}")))?;
            let text = gm.map.to_string();
            match output {
                Some(path) => write_out(&path, &text)?,
                None => print!("{text}"),
            }
            if let Some(path) = svg {
                write_out(&path, &render_svg(&gm, &analysis, color))?;
            }
            if let Some(path) = geometry {
                write_out(&path, &geometry_dump(&gm))?;
            }
            Ok(0)
        }
        Command::Equiv { map_a, map_b, oracle } => {
            let (left_map, left) = encode_map(&map_a)?;
            let (right_map, right) = encode_map(&map_b)?;
            let by_word = left.word == right.word;
            println!("{}", if by_word { "equivalent" } else { "distinct" });
            if oracle {
                let by_oracle = left_map
                    .equivalent(&right_map)
                    .map_err(|e| fail(2, e.to_string()))?;
                println!(
                    "oracle {}",
                    if by_oracle { "equivalent" } else { "distinct" }
                );
                if by_word != by_oracle {
                    return Err(fail(3, "word test and oracle disagree"));
                }
            }
            Ok(if by_word { 0 } else { 1 })
        }
        Command::Color { map_file } => {
            let (map, enc) = encode_map(&map_file)?;
            let mut names: Vec<&str> = (0..map.face_count()).map(|i| map.face_name(i)).collect();
            names.sort_unstable();
            for name in names {
                let idx = map.face_index(name).expect("own name");
                println!("{name} c{}", enc.colors[idx]);
            }
            Ok(0)
        }
        Command::Roundtrip { mode, file } => match mode {
            Mode::Word => {
                let word = load_word(&file)?;
                let analysis =
                    validate(&word).map_err(|e| fail(1, format!("invalid word: {e}")))?;
                let gm = decode(&analysis).map_err(|e| fail(3, format!("decode failed: {e}")))?;
                let enc = encode(&gm.map).map_err(|e| fail(3, format!("re-encode failed: {e}")))?;
                if enc.word == word {
                    println!("identical ({} tokens)", word.len());
                    Ok(0)
                } else {
                    let at = (1..=word.len().min(enc.word.len()))
                        .find(|&i| word.at(i) != enc.word.at(i))
                        .unwrap_or(word.len().min(enc.word.len()) + 1);
                    println!("mismatch at token {at}");
                    Ok(1)
                }
            }
            Mode::Map => {
                let map = load_map(&file)?;
                let enc = encode(&map).map_err(|e| fail(2, e.to_string()))?;
                let analysis = validate(&enc.word)
                    .map_err(|e| fail(3, format!("emitted word is invalid: {e}")))?;
                let gm = decode(&analysis).map_err(|e| fail(3, format!("decode failed: {e}")))?;
                let equivalent = map
                    .equivalent(&gm.map)
                    .map_err(|e| fail(3, e.to_string()))?;
                if equivalent {
                    println!("equivalent after round-trip");
                    Ok(0)
                } else {
                    println!("round-trip map is not equivalent");
                    Ok(1)
                }
            }
        },
        Command::Enumerate { max_pairs, check_injective, bound } => {
            if max_pairs > bound {
                return Err(fail(2, format!("max pairs {max_pairs} exceeds bound {bound}")));
            }
            let words = enumerate_valid_words(max_pairs);
            let mut counts: Vec<usize> = vec![0; max_pairs + 1];
            for w in &words {
                counts[w.tokens.iter().filter(|t| t.is_opener()).count()] += 1;
            }
            for (pairs, count) in counts.iter().enumerate().skip(1) {
                println!("pairs {pairs} count {count}");
            }
            println!("total {}", words.len());
            if check_injective {
                let mut maps = Vec::new();
                for w in &words {
                    let analysis = validate(w)
                        .map_err(|e| fail(3, format!("enumerated word is invalid: {e}")))?;
                    let gm =
                        decode(&analysis).map_err(|e| fail(3, format!("decode failed: {e}")))?;
                    maps.push(gm.map);
                }
                for i in 0..maps.len() {
                    for j in 0..i {
                        let eq = maps[i]
                            .equivalent(&maps[j])
                            .map_err(|e| fail(3, e.to_string()))?;
                        if eq {
                            return Err(fail(
                                3,
                                format!("words {j} and {i} decode to equivalent maps"),
                            ));
                        }
                    }
                }
                println!("injective ok {}", maps.len());
            }
            Ok(0)
        }
    }
}
