//! Reo channels and nodes as recursive processes, connector topologies and
//! their composition into one process.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::multiactions::{is_identifier, Action, ActionSet, MultiAction};
use crate::process::{CommRule, CommSet, Definition, ProcName, ProcessTerm, Specification};

/// Channel and node primitives.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Primitive {
    Sync,
    LossySync,
    SyncDrain,
    Fifo,
    Replicator,
    Merger,
    PumpingStation,
    Boundary,
}

impl Primitive {
    pub const ALL: [Primitive; 8] = [
        Primitive::Sync,
        Primitive::LossySync,
        Primitive::SyncDrain,
        Primitive::Fifo,
        Primitive::Replicator,
        Primitive::Merger,
        Primitive::PumpingStation,
        Primitive::Boundary,
    ];

    pub fn arity(self) -> usize {
        match self {
            Primitive::Replicator | Primitive::Merger => 3,
            Primitive::Boundary => 1,
            _ => 2,
        }
    }

    /// End names used by [`Primitive::standalone`].
    pub fn default_ends(self) -> &'static [&'static str] {
        match self {
            Primitive::Sync | Primitive::LossySync | Primitive::SyncDrain | Primitive::Fifo => &["a", "b"],
            Primitive::Replicator => &["snk", "src1", "src2"],
            Primitive::Merger => &["snk1", "snk2", "src"],
            Primitive::PumpingStation => &["snk", "src"],
            Primitive::Boundary => &["bnd"],
        }
    }

    /// A one-definition specification of this primitive on its default ends.
    pub fn standalone(self) -> Specification {
        let ends: Vec<Action> = self
            .default_ends()
            .iter()
            .map(|n| Action::new(n).expect("identifier"))
            .collect();
        let name = ProcName::new(&self.to_string()).expect("identifier");
        Specification::single(primitive(self, name, &ends).expect("arity matches")).expect("valid")
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn ma(actions: &[&Action]) -> ProcessTerm {
    ProcessTerm::act(MultiAction::from_actions(actions.iter().map(|a| (*a).clone())))
}

/// The recursive definition `name ↦ body · name` of a primitive. End order:
/// source then sink for channels (both sources for `SyncDrain`), sinks then
/// sources for nodes.
pub fn primitive(kind: Primitive, name: ProcName, ends: &[Action]) -> Result<Definition> {
    if ends.len() != kind.arity() {
        return Err(Error::ArityMismatch {
            kind: kind.to_string(),
            expected: kind.arity(),
            got: ends.len(),
        });
    }
    let e = ends;
    let step = match kind {
        Primitive::Sync | Primitive::SyncDrain | Primitive::PumpingStation => ma(&[&e[0], &e[1]]),
        Primitive::LossySync => ProcessTerm::alt(ma(&[&e[0], &e[1]]), ma(&[&e[0]])),
        Primitive::Fifo => ProcessTerm::seq(ma(&[&e[0]]), ma(&[&e[1]])),
        Primitive::Replicator => ma(&[&e[0], &e[1], &e[2]]),
        Primitive::Merger => ProcessTerm::alt(ma(&[&e[0], &e[2]]), ma(&[&e[1], &e[2]])),
        Primitive::Boundary => ma(&[&e[0]]),
    };
    let body = seq_then(step, ProcessTerm::Ref(name.clone()));
    Ok(Definition::new(name, body))
}

/// `p · q` with `p`'s own sequential chain extended to the right.
fn seq_then(p: ProcessTerm, q: ProcessTerm) -> ProcessTerm {
    match p {
        ProcessTerm::Seq(a, b) => {
            ProcessTerm::Seq(a, std::sync::Arc::new(seq_then((*b).clone(), q)))
        }
        p => ProcessTerm::seq(p, q),
    }
}

/// A node with arbitrary numbers of sink and source ends: every step takes
/// from one sink and hands to all sources at once.
pub fn node_process(name: ProcName, sinks: &[Action], sources: &[Action]) -> Result<Definition> {
    match (sinks.len(), sources.len()) {
        (1, 1) => {
            return primitive(Primitive::PumpingStation, name, &[sinks[0].clone(), sources[0].clone()])
        }
        (1, 2) => {
            let ends = [sinks[0].clone(), sources[0].clone(), sources[1].clone()];
            return primitive(Primitive::Replicator, name, &ends);
        }
        (2, 1) => {
            let ends = [sinks[0].clone(), sinks[1].clone(), sources[0].clone()];
            return primitive(Primitive::Merger, name, &ends);
        }
        (0, _) | (_, 0) => return Err(Error::DanglingNode(name.to_string())),
        _ => {}
    }
    let options: Vec<ProcessTerm> = sinks
        .iter()
        .map(|s| {
            let mut all: Vec<&Action> = vec![s];
            all.extend(sources);
            ma(&all)
        })
        .collect();
    let step = ProcessTerm::fold_right(options, ProcessTerm::alt).expect("nonempty");
    let body = ProcessTerm::seq(step, ProcessTerm::Ref(name.clone()));
    Ok(Definition::new(name, body))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ChannelKind {
    Sync,
    LossySync,
    SyncDrain,
    Fifo,
}

impl ChannelKind {
    fn primitive(self) -> Primitive {
        match self {
            ChannelKind::Sync => Primitive::Sync,
            ChannelKind::LossySync => Primitive::LossySync,
            ChannelKind::SyncDrain => Primitive::SyncDrain,
            ChannelKind::Fifo => Primitive::Fifo,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            ChannelKind::Sync => "sync",
            ChannelKind::LossySync => "lossysync",
            ChannelKind::SyncDrain => "syncdrain",
            ChannelKind::Fifo => "fifo",
        }
    }

    /// Whether the second end dispenses data (a sink end).
    fn second_is_sink(self) -> bool {
        self != ChannelKind::SyncDrain
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ChannelDecl {
    pub kind: ChannelKind,
    pub first: String,
    pub second: String,
}

impl fmt::Display for ChannelDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = if self.kind.second_is_sink() { "->" } else { "--" };
        write!(f, "{} {} {} {}", self.kind.keyword(), self.first, arrow, self.second)
    }
}

/// One channel end as seen from its node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct End {
    pub channel: usize,
    /// Position among the ends at this node, from 1.
    pub index: usize,
    /// True when data flows from the channel into the node.
    pub is_sink: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ConnectorTopology {
    pub channels: Vec<ChannelDecl>,
    pub boundary: BTreeSet<String>,
}

fn topo_syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        message: message.into(),
    }
}

impl ConnectorTopology {
    /// Parses one declaration per line: `fifo a -> x`, `sync a -> b`,
    /// `lossysync a -> b`, `syncdrain a -- b`, `boundary a, b`. Text after
    /// `//` or `%` is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut topo = ConnectorTopology::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split("//").next().unwrap_or("");
            let line = line.split('%').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            let rest_col = indent + keyword.len() + 2;
            let check_node = |name: &str| -> Result<String> {
                if is_identifier(name) {
                    Ok(name.to_string())
                } else {
                    let col = line.find(name).map_or(rest_col, |c| c + 1);
                    Err(topo_syntax(line_no, col, format!("invalid node name `{name}`")))
                }
            };
            if keyword == "boundary" {
                for name in rest.split(',') {
                    topo.boundary.insert(check_node(name.trim())?);
                }
                continue;
            }
            let kind = match keyword {
                "fifo" => ChannelKind::Fifo,
                "sync" => ChannelKind::Sync,
                "lossysync" => ChannelKind::LossySync,
                "syncdrain" => ChannelKind::SyncDrain,
                _ => {
                    return Err(topo_syntax(
                        line_no,
                        indent + 1,
                        format!("unknown declaration `{keyword}`"),
                    ))
                }
            };
            let arrow = if kind.second_is_sink() { "->" } else { "--" };
            let Some((first, second)) = rest.split_once(arrow) else {
                return Err(topo_syntax(line_no, rest_col, format!("expected `{arrow}` between the two nodes")));
            };
            let decl = ChannelDecl {
                kind,
                first: check_node(first.trim())?,
                second: check_node(second.trim())?,
            };
            topo.add_channel(decl)?;
        }
        Ok(topo)
    }

    pub fn add_channel(&mut self, decl: ChannelDecl) -> Result<()> {
        if self.channels.contains(&decl) {
            return Err(Error::DuplicateChannel(decl.to_string()));
        }
        self.channels.push(decl);
        Ok(())
    }

    /// Node names in first-use order (channels first, then boundary-only names).
    pub fn nodes(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.channels {
            for n in [&c.first, &c.second] {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
        }
        for n in &self.boundary {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        out
    }

    /// Ends coinciding on `node`, in declaration order.
    pub fn ends_at(&self, node: &str) -> Vec<End> {
        let mut out = Vec::new();
        for (ci, c) in self.channels.iter().enumerate() {
            if c.first == node {
                out.push(End {
                    channel: ci,
                    index: out.len() + 1,
                    is_sink: false,
                });
            }
            if c.second == node {
                out.push(End {
                    channel: ci,
                    index: out.len() + 1,
                    is_sink: c.kind.second_is_sink(),
                });
            }
        }
        out
    }

    /// Channels that `a` refers to: a channel end (either side) belongs to
    /// one channel; a node action stands for all channels incident to it.
    pub fn channels_of(&self, a: &Action) -> Result<BTreeSet<usize>> {
        let name = a.name();
        for node in self.nodes() {
            if name == node {
                return Ok(self.ends_at(&node).iter().map(|e| e.channel).collect());
            }
            for e in self.ends_at(&node) {
                if name == end_name(&node, e.index) || name == bar(&end_name(&node, e.index)) {
                    return Ok([e.channel].into());
                }
            }
        }
        Err(Error::UnknownEnd(name.to_string()))
    }

    /// True iff `a` and `b` are distinct and belong to a common channel.
    pub fn connected(&self, a: &Action, b: &Action) -> Result<bool> {
        let ca = self.channels_of(a)?;
        let cb = self.channels_of(b)?;
        Ok(a != b && !ca.is_disjoint(&cb))
    }

    /// The composed connector process, rooted at `Connector`.
    pub fn compose(&self) -> Result<Specification> {
        let mut defs: Vec<Definition> = Vec::new();
        let mut blocked = ActionSet::new();
        let mut rules = CommSet::new();
        let mut channel_ends: Vec<[Option<Action>; 2]> = vec![[None, None]; self.channels.len()];
        let mut node_defs = Vec::new();

        for node in self.nodes() {
            let ends = self.ends_at(&node);
            let is_boundary = self.boundary.contains(&node);
            let node_action = Action::new(&node)?;
            let mut sinks = Vec::new();
            let mut sources = Vec::new();
            for e in &ends {
                let channel_side = Action::new(&end_name(&node, e.index))?;
                let node_side = Action::new(&bar(channel_side.name()))?;
                let c = &self.channels[e.channel];
                let slot = if c.first == node && channel_ends[e.channel][0].is_none() { 0 } else { 1 };
                channel_ends[e.channel][slot] = Some(channel_side.clone());
                rules.insert(CommRule::new(
                    MultiAction::from_actions([channel_side.clone(), node_side.clone()]),
                    node_action.clone(),
                )?);
                blocked.insert(channel_side);
                blocked.insert(node_side.clone());
                if e.is_sink {
                    sinks.push(node_side);
                } else {
                    sources.push(node_side);
                }
            }
            if ends.is_empty() || (!sinks.is_empty() && !sources.is_empty() && is_boundary) {
                return Err(Error::DanglingNode(node));
            }
            if !is_boundary {
                if sinks.is_empty() || sources.is_empty() {
                    return Err(Error::DanglingNode(node));
                }
                let name = ProcName::new(&format!("Node_{node}"))?;
                node_defs.push(node_process(name, &sinks, &sources)?);
                continue;
            }
            let boundary_name = ProcName::new(&format!("Boundary_{node}"))?;
            if ends.len() == 1 {
                let end = sinks.into_iter().chain(sources).next().expect("one end");
                node_defs.push(primitive(Primitive::Boundary, boundary_name, &[end])?);
                continue;
            }
            // The environment attaches through one extra end pair.
            let env_end = Action::new(&format!("{node}_bnd"))?;
            let env_bar = Action::new(&bar(env_end.name()))?;
            rules.insert(CommRule::new(
                MultiAction::from_actions([env_end.clone(), env_bar.clone()]),
                node_action.clone(),
            )?);
            blocked.insert(env_end.clone());
            blocked.insert(env_bar.clone());
            node_defs.push(primitive(Primitive::Boundary, boundary_name, &[env_end])?);
            let name = ProcName::new(&format!("Node_{node}"))?;
            if sinks.is_empty() {
                node_defs.push(node_process(name, &[env_bar], &sources)?);
            } else {
                node_defs.push(node_process(name, &sinks, &[env_bar])?);
            }
        }

        for (i, c) in self.channels.iter().enumerate() {
            let name = ProcName::new(&format!("{}{}", c.kind.primitive(), i + 1))?;
            let [Some(first), Some(second)] = channel_ends[i].clone() else {
                unreachable!("every channel has two ends")
            };
            defs.push(primitive(c.kind.primitive(), name, &[first, second])?);
        }
        defs.extend(node_defs);

        let root = ProcName::new("Connector")?;
        let mut names: BTreeSet<String> = BTreeSet::new();
        for d in &defs {
            if !names.insert(d.name.to_string()) {
                return Err(Error::NameCollision(d.name.to_string()));
            }
        }
        for n in self.nodes() {
            let clash = blocked.iter().any(|a| a.name() == n) || names.contains(&n) || n == root.as_str();
            if clash {
                return Err(Error::NameCollision(n));
            }
        }
        let par = ProcessTerm::fold_right(
            defs.iter().map(|d| ProcessTerm::Ref(d.name.clone())).collect(),
            ProcessTerm::par,
        )
        .ok_or_else(|| Error::DanglingNode("(empty connector)".to_string()))?;
        let body = ProcessTerm::block(blocked, ProcessTerm::comm(rules, par));
        defs.insert(0, Definition::new(root.clone(), body));
        Specification::new(defs, root)
    }
}

/// Channel-side action of the `k`-th end at `node`.
pub fn end_name(node: &str, k: usize) -> String {
    format!("{node}_{k}")
}

/// Node-side counterpart of a channel-side end action.
pub fn bar(end: &str) -> String {
    format!("{end}_bar")
}
