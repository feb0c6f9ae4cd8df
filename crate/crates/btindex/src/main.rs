//! `btindex` command line: build an index file from raw bytes, then search,
//! extract, inspect, or verify it against the original.
//!
//! Exit codes: 0 ok, 1 usage or bad arguments, 2 I/O, 3 corrupt index,
//! 4 verification failure.

use btindex::{format, Error, TextIndex};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "btindex", version, about = "Block-tree compressed self-index")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an index from a file of raw bytes
    Build {
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Print all 1-based occurrence positions of a pattern
    Search {
        index: PathBuf,
        /// Pattern bytes; \xHH escapes and \\ are recognized
        pattern: String,
        /// Print only the number of occurrences
        #[arg(long)]
        count: bool,
    },
    /// Write a substring of the original file to stdout
    Extract {
        index: PathBuf,
        /// 1-based start position
        from: u64,
        len: u64,
    },
    /// Print index statistics
    Stats { index: PathBuf },
    /// Cross-check the index against the original file with brute force
    Verify {
        index: PathBuf,
        original: PathBuf,
        #[arg(long, default_value_t = 200)]
        patterns: u64,
        #[arg(long = "max-m", default_value_t = 32)]
        max_m: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("btindex: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::OutOfRange(_) => 1,
        Error::Io(_) | Error::Construction(_) => 2,
        Error::Corrupt(_) => 3,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Build { input, output } => {
            let bytes = std::fs::read(&input)?;
            if bytes.is_empty() {
                return Err(Error::InvalidArgument("empty input".into()));
            }
            let index = TextIndex::from_bytes(&bytes)?;
            let written = format::save_to_path(&index, &output)?;
            let s = index.tree.stats();
            println!("n: {}", s.n);
            println!("z: {}", s.z);
            println!("z_top: {}", s.z_top);
            println!("b0: {}", s.b0);
            println!("levels: {}", s.num_levels);
            println!("w: {}", s.w);
            println!("num_points: {}", s.num_points);
            println!("bytes written: {written}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Search { index, pattern, count } => {
            let index = format::load_from_path(&index)?;
            let pattern = unescape(&pattern)?;
            let positions = index.search_bytes(&pattern)?;
            if count {
                println!("{}", positions.len());
            } else {
                let mut out = std::io::stdout().lock();
                for p in positions {
                    writeln!(out, "{p}")?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Extract { index, from, len } => {
            let index = format::load_from_path(&index)?;
            let bytes = index.extract_bytes(from, len)?;
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Stats { index } => {
            let file_bytes = std::fs::metadata(&index)?.len();
            let index = format::load_from_path(&index)?;
            let s = index.tree.stats();
            println!("sigma: {}", s.sigma);
            println!("n_original: {}", s.n_original);
            println!("n: {}", s.n);
            println!("z: {}", s.z);
            println!("z_top: {}", s.z_top);
            println!("b0: {}", s.b0);
            println!("levels: {}", s.num_levels);
            println!("marked blocks: {}", s.marked_blocks);
            println!("unmarked blocks: {}", s.unmarked_blocks);
            println!("w: {}", s.w);
            println!("num_points: {}", s.num_points);
            println!("estimated bits (3 w log n): {}", s.estimated_bits);
            println!("file bytes: {file_bytes}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { index, original, patterns, max_m, seed } => {
            let index = format::load_from_path(&index)?;
            let text = std::fs::read(&original)?;
            verify(&index, &text, patterns, max_m, seed)
        }
    }
}

/// Samples occurring and random patterns plus extraction ranges, comparing
/// the index against direct scans of the original bytes.
fn verify(index: &TextIndex, text: &[u8], patterns: u64, max_m: u64, seed: u64) -> Result<ExitCode, Error> {
    if text.is_empty() {
        return Err(Error::InvalidArgument("empty original file".into()));
    }
    if index.tree.n_original() != text.len() as u64 {
        println!(
            "MISMATCH: index covers {} bytes, file has {}",
            index.tree.n_original(),
            text.len()
        );
        return Ok(ExitCode::from(4));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let distinct: Vec<u8> = {
        let mut present = [false; 256];
        for &b in text {
            present[b as usize] = true;
        }
        (0u16..256).filter(|&b| present[b as usize]).map(|b| b as u8).collect()
    };
    let max_m = max_m.clamp(1, text.len() as u64);

    for i in 0..patterns {
        let len = rng.gen_range(1..=max_m) as usize;
        let pattern: Vec<u8> = if i % 2 == 0 {
            let start = rng.gen_range(0..=text.len() - len);
            text[start..start + len].to_vec()
        } else {
            (0..len).map(|_| distinct[rng.gen_range(0..distinct.len())]).collect()
        };
        let got = index.search_bytes(&pattern)?;
        let want = naive_byte_search(text, &pattern);
        if got != want {
            println!(
                "MISMATCH: pattern {:?} -> {} positions from index, {} from scan",
                escape(&pattern),
                got.len(),
                want.len()
            );
            return Ok(ExitCode::from(4));
        }
    }
    for _ in 0..patterns {
        let len = rng.gen_range(0..=max_m.min(256)) as usize;
        let from = rng.gen_range(1..=text.len() - len + 1) as u64;
        let got = index.extract_bytes(from, len as u64)?;
        let want = &text[(from - 1) as usize..(from - 1) as usize + len];
        if got != want {
            println!("MISMATCH: extract({from}, {len}) disagrees with the file");
            return Ok(ExitCode::from(4));
        }
    }
    println!("verified {patterns} patterns and {patterns} extracts: OK (seed {seed})");
    Ok(ExitCode::SUCCESS)
}

fn naive_byte_search(text: &[u8], pattern: &[u8]) -> Vec<u64> {
    if pattern.is_empty() || pattern.len() > text.len() {
        return Vec::new();
    }
    (0..=text.len() - pattern.len())
        .filter(|&s| &text[s..s + pattern.len()] == pattern)
        .map(|s| s as u64 + 1)
        .collect()
}

fn unescape(s: &str) -> Result<Vec<u8>, Error> {
    let mut out = Vec::with_capacity(s.len());
    let mut bytes = s.bytes();
    while let Some(b) = bytes.next() {
        if b != b'\\' {
            out.push(b);
            continue;
        }
        match bytes.next() {
            Some(b'\\') => out.push(b'\\'),
            Some(b'x') => {
                let hi = bytes.next();
                let lo = bytes.next();
                match (hi.and_then(hex), lo.and_then(hex)) {
                    (Some(h), Some(l)) => out.push(h << 4 | l),
                    _ => return Err(Error::InvalidArgument(format!("bad \\x escape in {s:?}"))),
                }
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown escape \\{} in {s:?}",
                    other.map(|c| c as char).unwrap_or(' ')
                )))
            }
        }
    }
    Ok(out)
}

fn hex(b: u8) -> Option<u8> {
    match b {
        b'0'..=b'9' => Some(b - b'0'),
        b'a'..=b'f' => Some(b - b'a' + 10),
        b'A'..=b'F' => Some(b - b'A' + 10),
        _ => None,
    }
}

fn escape(bytes: &[u8]) -> String {
    bytes
        .iter()
        .map(|&b| {
            if b.is_ascii_graphic() || b == b' ' {
                (b as char).to_string()
            } else {
                format!("\\x{b:02x}")
            }
        })
        .collect()
}
