//! graph6 short form (orders 0..=62).
//!
//! The first byte is `n + 63`. The upper triangle of the adjacency matrix is
//! then read column by column (`(0,1), (0,2), (1,2), (0,3), ...`), packed six
//! bits per byte big-endian, zero padded, and offset by 63.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_SHORT_ORDER: usize = 62;

pub fn encode(g: &Graph) -> Result<String> {
    let n = g.order();
    if n > MAX_SHORT_ORDER {
        return Err(Error::Capacity {
            what: "graph6 short-form order",
            got: n,
            limit: MAX_SHORT_ORDER,
        });
    }
    let mut out = String::with_capacity(1 + (n * (n - 1) / 2).div_ceil(6));
    out.push((n as u8 + 63) as char);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((acc << (6 - filled)) + 63) as char);
    }
    Ok(out)
}

pub fn decode(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let parse = |offset: usize, msg: &str| Error::Parse {
        offset,
        msg: msg.to_string(),
    };
    let (&head, body) = bytes.split_first().ok_or_else(|| parse(0, "empty input"))?;
    if head == b'~' {
        return Err(Error::Capacity {
            what: "graph6 short-form order",
            got: MAX_SHORT_ORDER + 1,
            limit: MAX_SHORT_ORDER,
        });
    }
    if !(63..=126).contains(&head) {
        return Err(parse(0, "order byte outside the printable range 63..=126"));
    }
    let n = (head - 63) as usize;
    if n == 0 {
        return Err(parse(0, "order 0 is not a graph here"));
    }
    let bits = n * (n - 1) / 2;
    let need = bits.div_ceil(6);
    if body.len() < need {
        return Err(parse(1 + body.len(), "truncated adjacency data"));
    }
    if body.len() > need {
        return Err(parse(1 + need, "trailing bytes after adjacency data"));
    }
    for (k, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse(1 + k, "byte outside the printable range 63..=126"));
        }
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if let Some(k) = (bits..need * 6).find(|&k| bit(k)) {
        return Err(parse(1 + k / 6, "non-zero padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_bw() {
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(encode(&k3).unwrap(), "Bw");
    }

    #[test]
    fn known_five_vertex_string() {
        // edges a-c, a-e, b-d, d-e
        let g = Graph::new(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode(&g).unwrap(), "DQc");
        assert_eq!(decode("DQc").unwrap(), g);
    }

    #[test]
    fn cycle_round_trip() {
        let c7 = Graph::new(7, &(0..7).map(|i| (i, (i + 1) % 7)).collect::<Vec<_>>()).unwrap();
        assert_eq!(decode(&encode(&c7).unwrap()).unwrap(), c7);
    }

    #[test]
    fn truncated_input() {
        assert!(matches!(decode("B"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(decode(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(decode("Bww"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(decode("B\u{7f}"), Err(Error::Parse { .. })));
    }

    #[test]
    fn padding_must_be_zero() {
        // n=3 uses 3 of 6 bits; 'x' = 63 + 0b111001 sets a padding bit
        assert!(matches!(decode("Bx"), Err(Error::Parse { offset: 1, .. })));
    }

    #[test]
    fn capacity() {
        assert!(matches!(decode("~?@?"), Err(Error::Capacity { .. })));
        let big = Graph::empty(63).unwrap();
        assert!(matches!(encode(&big), Err(Error::Capacity { .. })));
        let ok = Graph::empty(62).unwrap();
        assert_eq!(decode(&encode(&ok).unwrap()).unwrap(), ok);
    }
}
