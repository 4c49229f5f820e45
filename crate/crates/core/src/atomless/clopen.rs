use std::fmt;
use std::str::FromStr;

use super::WorkbenchError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Node {
    Zero,
    One,
    Split(Box<Node>, Box<Node>),
}

impl Node {
    /// Smart constructor; keeps the trie normalized (no split with two equal
    /// constant children).
    fn split(left: Node, right: Node) -> Node {
        match (&left, &right) {
            (Node::Zero, Node::Zero) => Node::Zero,
            (Node::One, Node::One) => Node::One,
            _ => Node::Split(Box::new(left), Box::new(right)),
        }
    }

    fn children(&self) -> (Node, Node) {
        match self {
            Node::Split(l, r) => ((**l).clone(), (**r).clone()),
            constant => (constant.clone(), constant.clone()),
        }
    }

    fn meet(&self, other: &Node) -> Node {
        match (self, other) {
            (Node::Zero, _) | (_, Node::Zero) => Node::Zero,
            (Node::One, x) | (x, Node::One) => x.clone(),
            (Node::Split(a0, a1), Node::Split(b0, b1)) => Node::split(a0.meet(b0), a1.meet(b1)),
        }
    }

    fn join(&self, other: &Node) -> Node {
        match (self, other) {
            (Node::One, _) | (_, Node::One) => Node::One,
            (Node::Zero, x) | (x, Node::Zero) => x.clone(),
            (Node::Split(a0, a1), Node::Split(b0, b1)) => Node::split(a0.join(b0), a1.join(b1)),
        }
    }

    fn complement(&self) -> Node {
        match self {
            Node::Zero => Node::One,
            Node::One => Node::Zero,
            Node::Split(l, r) => Node::Split(Box::new(l.complement()), Box::new(r.complement())),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Split(l, r) => 1 + l.depth().max(r.depth()),
            _ => 0,
        }
    }

    fn collect_words(&self, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        match self {
            Node::Zero => {}
            Node::One => out.push(prefix.clone()),
            Node::Split(l, r) => {
                prefix.push(false);
                l.collect_words(prefix, out);
                prefix.pop();
                prefix.push(true);
                r.collect_words(prefix, out);
                prefix.pop();
            }
        }
    }

    fn cylinder(word: &[bool]) -> Node {
        match word.split_first() {
            None => Node::One,
            Some((false, rest)) => Node::split(Node::cylinder(rest), Node::Zero),
            Some((true, rest)) => Node::split(Node::Zero, Node::cylinder(rest)),
        }
    }
}

/// A clopen subset of Cantor space `2^ω`: an element of the countable
/// atomless Boolean algebra.
///
/// Stored as a normalized binary trie, so that equal sets have identical
/// representations. The leaves marked full are the maximal cylinders inside
/// the set; [`ClopenSet::words`] lists them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClopenSet {
    root: Node,
}

impl ClopenSet {
    pub fn zero() -> Self {
        ClopenSet { root: Node::Zero }
    }

    pub fn one() -> Self {
        ClopenSet { root: Node::One }
    }

    /// The cylinder of all sequences extending `word`.
    pub fn cylinder(word: &[bool]) -> Self {
        ClopenSet {
            root: Node::cylinder(word),
        }
    }

    /// Cylinder from a word written as a `0`/`1` string.
    pub fn cyl(word: &str) -> Self {
        Self::cylinder(&parse_word(word).expect("binary word"))
    }

    /// Union of the cylinders of `words`.
    pub fn from_words<W: AsRef<[bool]>>(words: impl IntoIterator<Item = W>) -> Self {
        words
            .into_iter()
            .fold(Self::zero(), |acc, w| acc.join(&Self::cylinder(w.as_ref())))
    }

    /// The set with uniform depth `depth` whose words are the set bits of `mask`
    /// (bit `i` is the word spelling `i` in binary, most significant bit first).
    pub fn from_mask(depth: usize, mask: u64) -> Self {
        assert!(depth <= 6, "mask holds at most 64 words");
        fn build(depth: usize, lo: usize, mask: u64) -> Node {
            if depth == 0 {
                return if mask >> lo & 1 == 1 { Node::One } else { Node::Zero };
            }
            let half = 1 << (depth - 1);
            Node::split(build(depth - 1, lo, mask), build(depth - 1, lo + half, mask))
        }
        ClopenSet {
            root: build(depth, 0, mask),
        }
    }

    pub fn meet(&self, other: &ClopenSet) -> ClopenSet {
        ClopenSet {
            root: self.root.meet(&other.root),
        }
    }

    pub fn join(&self, other: &ClopenSet) -> ClopenSet {
        ClopenSet {
            root: self.root.join(&other.root),
        }
    }

    pub fn complement(&self) -> ClopenSet {
        ClopenSet {
            root: self.root.complement(),
        }
    }

    /// `self ∧ ¬other`
    pub fn minus(&self, other: &ClopenSet) -> ClopenSet {
        self.meet(&other.complement())
    }

    pub fn is_zero(&self) -> bool {
        self.root == Node::Zero
    }

    pub fn is_one(&self) -> bool {
        self.root == Node::One
    }

    /// `self ≤ other`, i.e. `self ∧ ¬other = 0`.
    pub fn leq(&self, other: &ClopenSet) -> bool {
        self.minus(other).is_zero()
    }

    pub fn lt(&self, other: &ClopenSet) -> bool {
        self.leq(other) && self != other
    }

    pub fn disjoint(&self, other: &ClopenSet) -> bool {
        self.meet(other).is_zero()
    }

    /// Least depth at which the set is a union of cylinders of that length.
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// The maximal cylinders inside the set, in lexicographic order.
    pub fn words(&self) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        self.root.collect_words(&mut Vec::new(), &mut out);
        out
    }

    /// Least word of the normal form; `None` for the empty set.
    pub fn least_word(&self) -> Option<Vec<bool>> {
        let mut word = Vec::new();
        let mut node = &self.root;
        loop {
            match node {
                Node::Zero => return None,
                Node::One => return Some(word),
                Node::Split(l, r) => {
                    if **l != Node::Zero {
                        word.push(false);
                        node = l;
                    } else {
                        word.push(true);
                        node = r;
                    }
                }
            }
        }
    }

    /// All words of length `depth` (at least [`Self::depth`]) whose cylinders
    /// lie in the set.
    pub fn words_at_depth(&self, depth: usize) -> Vec<Vec<bool>> {
        fn walk(node: &Node, left: usize, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
            if left == 0 {
                if *node == Node::One {
                    out.push(prefix.clone());
                }
                return;
            }
            let (l, r) = node.children();
            prefix.push(false);
            walk(&l, left - 1, prefix, out);
            prefix.pop();
            prefix.push(true);
            walk(&r, left - 1, prefix, out);
            prefix.pop();
        }
        assert!(depth >= self.depth());
        let mut out = Vec::new();
        walk(&self.root, depth, &mut Vec::new(), &mut out);
        out
    }

    /// `self ∧ cyl(word)`
    pub fn restrict(&self, word: &[bool]) -> ClopenSet {
        self.meet(&Self::cylinder(word))
    }
}

fn parse_word(text: &str) -> Option<Vec<bool>> {
    if text == "*" || text == "ε" {
        return Some(Vec::new());
    }
    text.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

fn show_word(word: &[bool]) -> String {
    if word.is_empty() {
        "*".to_string()
    } else {
        word.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.words().iter().map(|w| show_word(w)).collect();
        write!(f, "{{{}}}", words.join(","))
    }
}

impl serde::Serialize for ClopenSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `{w1,w2,...}` where each word is a `0`/`1` string and `*` is the
/// empty word. `{}` is the empty set and `{*}` the whole space.
impl FromStr for ClopenSet {
    type Err = WorkbenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| WorkbenchError::Parse(format!("expected {{words}}, got {s:?}")))?;
        let mut words = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            words.push(
                parse_word(part)
                    .ok_or_else(|| WorkbenchError::Parse(format!("bad binary word {part:?}")))?,
            );
        }
        Ok(ClopenSet::from_words(words))
    }
}
