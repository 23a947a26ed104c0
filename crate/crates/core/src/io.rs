//! Plain-text formats for set systems and partitions.
//!
//! Set system:
//!
//! ```text
//! n m
//! k i_1 ... i_k        (one line per range, indices strictly increasing)
//! ```
//!
//! Partition:
//!
//! ```text
//! n t
//! p_0 p_1 ... p_{n-1}  (part id of every element, each < t)
//! ```
//!
//! Readers skip `#` comment lines before the header and blank lines after
//! the last record.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::system::{Partition, SetSystem};

pub fn write_setsystem(system: &SetSystem, out: impl Write) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{} {}", system.n(), system.m())?;
    let mut line = String::new();
    for range in system.ranges() {
        line.clear();
        line.push_str(&range.count().to_string());
        for x in range.iter() {
            line.push(' ');
            line.push_str(&x.to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    lineno: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(reader: R) -> Self {
        Lines { inner: reader.lines(), lineno: 0 }
    }

    fn next_line(&mut self) -> Result<Option<String>> {
        match self.inner.next() {
            Some(line) => {
                self.lineno += 1;
                Ok(Some(line?))
            }
            None => Ok(None),
        }
    }

    fn header(&mut self) -> Result<String> {
        loop {
            match self.next_line()? {
                Some(line) if line.trim_start().starts_with('#') => continue,
                Some(line) => return Ok(line),
                None => return Err(Error::parse(self.lineno + 1, "missing header")),
            }
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        while let Some(line) = self.next_line()? {
            if !line.trim().is_empty() {
                return Err(Error::parse(self.lineno, "unexpected content after the last record"));
            }
        }
        Ok(())
    }
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_ascii_whitespace()
        .map(|tok| tok.parse().map_err(|_| Error::parse(lineno, format!("expected a non-negative integer, got {tok:?}"))))
        .collect()
}

fn parse_pair(line: &str, lineno: usize, what: &str) -> Result<(usize, usize)> {
    match parse_numbers(line, lineno)?[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Error::parse(lineno, format!("header must be \"{what}\""))),
    }
}

pub fn read_setsystem(input: impl BufRead) -> Result<SetSystem> {
    let mut lines = Lines::new(input);
    let header = lines.header()?;
    let (n, m) = parse_pair(&header, lines.lineno, "n m")?;
    if n == 0 {
        return Err(Error::parse(lines.lineno, "a set system needs at least one element"));
    }
    let mut ranges = Vec::with_capacity(m);
    for f in 0..m {
        let line = lines
            .next_line()?
            .ok_or_else(|| Error::parse(lines.lineno + 1, format!("header announces {m} ranges, found {f}")))?;
        let lineno = lines.lineno;
        let nums = parse_numbers(&line, lineno)?;
        let (&k, members) = nums.split_first().ok_or_else(|| Error::parse(lineno, "empty range line"))?;
        if members.len() != k {
            return Err(Error::parse(lineno, format!("range announces {k} members, found {}", members.len())));
        }
        let mut set = BitSet::new(n);
        let mut prev = None;
        for &x in members {
            if x >= n {
                return Err(Error::parse(lineno, format!("element {x} out of range (n = {n})")));
            }
            if prev.is_some_and(|p| x <= p) {
                return Err(Error::parse(lineno, "indices must be strictly increasing"));
            }
            prev = Some(x);
            set.insert(x);
        }
        ranges.push(set);
    }
    lines.expect_end()?;
    SetSystem::from_bitsets(n, ranges)
}

pub fn write_partition(partition: &Partition, out: impl Write) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{} {}", partition.n(), partition.t())?;
    let ids: Vec<String> = partition.assignment().iter().map(u32::to_string).collect();
    writeln!(out, "{}", ids.join(" "))?;
    out.flush()?;
    Ok(())
}

pub fn read_partition(input: impl BufRead) -> Result<Partition> {
    let mut lines = Lines::new(input);
    let header = lines.header()?;
    let (n, t) = parse_pair(&header, lines.lineno, "n t")?;
    if t == 0 {
        return Err(Error::parse(lines.lineno, "a partition needs at least one part"));
    }
    let body = lines.next_line()?.unwrap_or_default();
    let lineno = lines.lineno.max(2);
    let ids = parse_numbers(&body, lineno)?;
    if ids.len() != n {
        return Err(Error::parse(lineno, format!("header announces {n} elements, found {}", ids.len())));
    }
    if let Some(&bad) = ids.iter().find(|&&p| p >= t) {
        return Err(Error::parse(lineno, format!("part id {bad} out of range (t = {t})")));
    }
    lines.expect_end()?;
    Partition::new(ids.into_iter().map(|p| p as u32).collect(), t)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn read_setsystem_file(path: impl AsRef<Path>) -> Result<SetSystem> {
    read_setsystem(open(path.as_ref())?)
}

pub fn write_setsystem_file(system: &SetSystem, path: impl AsRef<Path>) -> Result<()> {
    write_setsystem(system, create(path.as_ref())?)
}

pub fn read_partition_file(path: impl AsRef<Path>) -> Result<Partition> {
    read_partition(open(path.as_ref())?)
}

pub fn write_partition_file(partition: &Partition, path: impl AsRef<Path>) -> Result<()> {
    write_partition(partition, create(path.as_ref())?)
}
