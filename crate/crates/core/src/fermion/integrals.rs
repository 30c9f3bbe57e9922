//! One- and two-electron integrals and the FCIDUMP reader.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Entries for the same index class that differ by more than this are
/// rejected as conflicting.
const DUPLICATE_TOL: f64 = 1e-10;

/// Spatial-orbital integrals of an active space.
///
/// `g` is stored in chemist notation, `g[(p, q, r, s)] = (pq|rs)`, and is
/// filled with all eight permutational images of every listed value.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralSet {
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub ms2: i64,
    pub isym: i64,
    pub orbsym: Vec<i64>,
    h: Vec<f64>,
    g: Vec<f64>,
    /// Nuclear repulsion energy (the `0 0 0 0` line).
    pub v_nn: f64,
    /// Electronic energy of the frozen core, read from the `E_FROZEN_CORE`
    /// header key. Always part of the electronic Hamiltonian.
    pub e_frozen_core: f64,
}

impl IntegralSet {
    pub fn new(n_orbitals: usize, n_electrons: usize) -> Self {
        IntegralSet {
            n_orbitals,
            n_electrons,
            ms2: 0,
            isym: 1,
            orbsym: vec![1; n_orbitals],
            h: vec![0.0; n_orbitals * n_orbitals],
            g: vec![0.0; n_orbitals.pow(4)],
            v_nn: 0.0,
            e_frozen_core: 0.0,
        }
    }

    #[inline]
    fn idx2(&self, p: usize, q: usize) -> usize {
        p * self.n_orbitals + q
    }

    #[inline]
    fn idx4(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        let n = self.n_orbitals;
        ((p * n + q) * n + r) * n + s
    }

    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.h[self.idx2(p, q)]
    }

    /// Chemist-notation `(pq|rs)`.
    pub fn g(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.g[self.idx4(p, q, r, s)]
    }

    pub fn set_h(&mut self, p: usize, q: usize, value: f64) {
        let (a, b) = (self.idx2(p, q), self.idx2(q, p));
        self.h[a] = value;
        self.h[b] = value;
    }

    /// Sets `(pq|rs)` and its seven symmetry images.
    pub fn set_g(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in eightfold(p, q, r, s) {
            let i = self.idx4(a, b, c, d);
            self.g[i] = value;
        }
    }

    /// Largest violation of `h_pq = h_qp` and of the eightfold symmetry of `g`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n_orbitals;
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                worst = worst.max((self.h(p, q) - self.h(q, p)).abs());
                for r in 0..n {
                    for s in 0..n {
                        let v = self.g(p, q, r, s);
                        for (a, b, c, d) in eightfold(p, q, r, s) {
                            worst = worst.max((v - self.g(a, b, c, d)).abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

fn eightfold(p: usize, q: usize, r: usize, s: usize) -> [(usize, usize, usize, usize); 8] {
    [
        (p, q, r, s),
        (q, p, r, s),
        (p, q, s, r),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, p, q),
        (r, s, q, p),
        (s, r, q, p),
    ]
}

fn canonical4(p: usize, q: usize, r: usize, s: usize) -> (usize, usize, usize, usize) {
    eightfold(p, q, r, s).into_iter().max().expect("nonempty")
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    Nuclear,
    One(usize, usize),
    Two(usize, usize, usize, usize),
}

fn parse_value(token: &str) -> Option<f64> {
    token.replace(['D', 'd'], "E").parse().ok()
}

/// Reads a Molpro-style FCIDUMP document.
///
/// The namelist header (`&FCI ... &END` or `/`) must provide `NORB` and
/// `NELEC`; `MS2`, `ORBSYM`, `ISYM` and the extension key `E_FROZEN_CORE`
/// are optional. Body lines are `value i j k l` with 1-based indices:
/// `i j k l` is `(ij|kl)`, `i j 0 0` is `h_ij`, `0 0 0 0` the nuclear
/// repulsion. Lines `i 0 0 0` (orbital energies) are ignored.
pub fn load_fcidump(text: &str) -> Result<IntegralSet> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    // header
    let mut header = String::new();
    let mut header_start = None;
    let mut header_done = false;
    for (no, line) in lines.by_ref() {
        let trimmed = line.trim();
        if header_start.is_none() {
            if trimmed.is_empty() {
                continue;
            }
            if !trimmed.to_ascii_uppercase().starts_with("&FCI") {
                return Err(Error::parse(no, "expected '&FCI' namelist header"));
            }
            header_start = Some(no);
            header.push_str(&trimmed[4..]);
        } else {
            header.push(' ');
            header.push_str(trimmed);
        }
        let upper = header.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END").or_else(|| upper.rfind('/')) {
            header.truncate(pos);
            header_done = true;
            break;
        }
    }
    let header_line = header_start.ok_or_else(|| Error::parse(1, "empty FCIDUMP"))?;
    if !header_done {
        return Err(Error::parse(header_line, "unterminated namelist header"));
    }
    let keys = parse_namelist(&header, header_line)?;

    let get_int = |key: &str| -> Result<Option<i64>> {
        match keys.get(key) {
            None => Ok(None),
            Some(v) if v.len() == 1 => v[0]
                .parse::<i64>()
                .map(Some)
                .map_err(|_| Error::parse(header_line, format!("{key} is not an integer"))),
            Some(_) => Err(Error::parse(header_line, format!("{key} expects one value"))),
        }
    };
    let norb = get_int("NORB")?.ok_or_else(|| Error::parse(header_line, "missing NORB"))?;
    let nelec = get_int("NELEC")?.ok_or_else(|| Error::parse(header_line, "missing NELEC"))?;
    if norb < 0 || nelec < 0 {
        return Err(Error::parse(header_line, "NORB and NELEC must be non-negative"));
    }
    if norb == 0 {
        return Err(Error::Usage("empty active space (NORB=0)".into()));
    }
    let norb = norb as usize;
    let mut ints = IntegralSet::new(norb, nelec as usize);
    if (nelec as usize) > 2 * norb {
        return Err(Error::parse(
            header_line,
            format!("NELEC={nelec} exceeds 2*NORB={}", 2 * norb),
        ));
    }
    ints.ms2 = get_int("MS2")?.unwrap_or(0);
    ints.isym = get_int("ISYM")?.unwrap_or(1);
    if let Some(sym) = keys.get("ORBSYM") {
        if sym.len() != norb {
            return Err(Error::parse(
                header_line,
                format!("ORBSYM has {} entries, NORB is {norb}", sym.len()),
            ));
        }
        ints.orbsym = sym
            .iter()
            .map(|s| s.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(header_line, "ORBSYM entries must be integers"))?;
    }
    if let Some(v) = keys.get("E_FROZEN_CORE") {
        ints.e_frozen_core = match v.as_slice() {
            [one] => parse_value(one),
            _ => None,
        }
        .ok_or_else(|| Error::parse(header_line, "E_FROZEN_CORE is not a number"))?;
    }

    // body
    let mut seen: HashMap<Slot, (f64, usize)> = HashMap::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(Error::parse(no, format!("expected 5 fields, found {}", fields.len())));
        }
        let value = parse_value(fields[0])
            .ok_or_else(|| Error::parse(no, format!("bad value {:?}", fields[0])))?;
        let mut idx = [0usize; 4];
        for (k, f) in fields[1..].iter().enumerate() {
            idx[k] = f
                .parse::<usize>()
                .map_err(|_| Error::parse(no, format!("bad index {f:?}")))?;
            if idx[k] > norb {
                return Err(Error::parse(
                    no,
                    format!("index {} out of range 0..={norb}", idx[k]),
                ));
            }
        }
        let slot = match idx {
            [0, 0, 0, 0] => Slot::Nuclear,
            [i, 0, 0, 0] if i > 0 => continue,
            [i, j, 0, 0] if i > 0 && j > 0 => {
                Slot::One(i.max(j) - 1, i.min(j) - 1)
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (a, b, c, d) = canonical4(i - 1, j - 1, k - 1, l - 1);
                Slot::Two(a, b, c, d)
            }
            _ => {
                return Err(Error::parse(
                    no,
                    format!("unsupported index pattern {:?}", idx),
                ))
            }
        };
        if let Some((prev, prev_line)) = seen.get(&slot) {
            if (prev - value).abs() > DUPLICATE_TOL {
                return Err(Error::parse(
                    no,
                    format!("conflicts with line {prev_line} ({prev} vs {value})"),
                ));
            }
        }
        seen.entry(slot).or_insert((value, no));
        match slot {
            Slot::Nuclear => ints.v_nn = value,
            Slot::One(p, q) => ints.set_h(p, q, value),
            Slot::Two(p, q, r, s) => ints.set_g(p, q, r, s, value),
        }
    }
    Ok(ints)
}

fn parse_namelist(body: &str, line: usize) -> Result<HashMap<String, Vec<String>>> {
    // Normalize "KEY = v" to "KEY=v" and treat commas as separators.
    let mut normalized = String::with_capacity(body.len());
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '=' {
            while normalized.ends_with(' ') {
                normalized.pop();
            }
            normalized.push('=');
            while chars.peek() == Some(&' ') {
                chars.next();
            }
        } else if c == ',' || c.is_whitespace() {
            normalized.push(' ');
        } else {
            normalized.push(c);
        }
    }
    let mut keys: HashMap<String, Vec<String>> = HashMap::new();
    let mut current: Option<String> = None;
    for token in normalized.split_whitespace() {
        if let Some((k, v)) = token.split_once('=') {
            let name = k.trim().to_ascii_uppercase();
            if name.is_empty() {
                return Err(Error::parse(line, "namelist entry without a key"));
            }
            let entry = keys.entry(name.clone()).or_default();
            entry.clear();
            if !v.is_empty() {
                entry.push(v.to_string());
            }
            current = Some(name);
        } else {
            let name = current
                .as_ref()
                .ok_or_else(|| Error::parse(line, format!("value {token:?} before any key")))?;
            keys.get_mut(name).expect("key inserted").push(token.to_string());
        }
    }
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_single_orbital() {
        let text = "&FCI NORB=1,NELEC=2,MS2=0,\n ORBSYM=1,\n ISYM=1,\n&END\n0.5 1 1 0 0\n0.25 1 1 1 1\n";
        let ints = load_fcidump(text).unwrap();
        assert_eq!(ints.n_orbitals, 1);
        assert_eq!(ints.h(0, 0), 0.5);
        assert_eq!(ints.g(0, 0, 0, 0), 0.25);
        assert_eq!(ints.v_nn, 0.0);
    }

    #[test]
    fn fills_all_permutations() {
        let text = "&FCI NORB=2,NELEC=2 /\n0.125 1 2 1 2\n";
        let ints = load_fcidump(text).unwrap();
        for (p, q, r, s) in eightfold(0, 1, 0, 1) {
            assert_eq!(ints.g(p, q, r, s), 0.125);
        }
        assert_eq!(ints.g(0, 0, 1, 1), 0.0);
        assert_eq!(ints.symmetry_defect(), 0.0);
    }

    #[test]
    fn reads_header_extensions_and_fortran_exponents() {
        let text = " &FCI NORB = 2, NELEC = 2, MS2 = 0,\n  ORBSYM = 1, 2,\n  ISYM=1,\n  E_FROZEN_CORE=-1.5D0,\n &END\n 1.0D-1 2 1 0 0\n 7.0 0 0 0 0\n -3.0 1 0 0 0\n";
        let ints = load_fcidump(text).unwrap();
        assert_eq!(ints.orbsym, vec![1, 2]);
        assert_eq!(ints.e_frozen_core, -1.5);
        assert_eq!(ints.h(0, 1), 0.1);
        assert_eq!(ints.h(1, 0), 0.1);
        assert_eq!(ints.v_nn, 7.0);
    }

    #[test]
    fn index_out_of_range_reports_line() {
        let text = "&FCI NORB=1,NELEC=1 &END\n0.5 1 1 0 0\n0.1 2 1 0 0\n";
        match load_fcidump(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn conflicting_duplicates_rejected() {
        let text = "&FCI NORB=2,NELEC=1 &END\n0.5 1 2 1 2\n0.5 2 1 2 1\n0.6 1 2 2 1\n";
        match load_fcidump(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("line 2"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_headers() {
        assert!(matches!(load_fcidump("0.5 1 1 0 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_fcidump("&FCI NORB=1,NELEC=1\n"), Err(Error::Parse { .. })));
        assert!(matches!(load_fcidump("&FCI NELEC=1 &END\n"), Err(Error::Parse { .. })));
        assert!(matches!(load_fcidump("&FCI NORB=x,NELEC=1 &END\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            load_fcidump("&FCI NORB=2,NELEC=1,ORBSYM=1 &END\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(load_fcidump("&FCI NORB=0,NELEC=0 &END\n"), Err(Error::Usage(_))));
    }

    #[test]
    fn malformed_body_lines() {
        let head = "&FCI NORB=2,NELEC=2 &END\n";
        assert!(load_fcidump(&format!("{head}0.5 1 1 0\n")).is_err());
        assert!(load_fcidump(&format!("{head}abc 1 1 0 0\n")).is_err());
        assert!(load_fcidump(&format!("{head}0.5 1 0 1 0\n")).is_err());
    }
}
