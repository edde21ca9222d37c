use serde_json::{json, Map, Value};
use thiserror::Error;

/// Pixel bounding box. `right` and `bottom` are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BoxPx {
    pub left: i64,
    pub top: i64,
    pub width: i64,
    pub height: i64,
}

impl BoxPx {
    pub fn new(left: i64, top: i64, width: i64, height: i64) -> Self {
        BoxPx {
            left,
            top,
            width,
            height,
        }
    }

    pub fn right(&self) -> i64 {
        self.left + self.width
    }

    pub fn bottom(&self) -> i64 {
        self.top + self.height
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementNode {
    /// Pre-order index path, e.g. `0.2.1`.
    pub elem_id: String,
    pub tag: String,
    pub id: Option<String>,
    pub classes: Vec<String>,
    pub bbox: BoxPx,
    pub text: Option<String>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SnapshotMeta {
    pub url: Option<String>,
    pub captured_at: Option<String>,
    pub warning: Option<String>,
}

/// A page as a tree of elements, stored flat in pre-order (index 0 is the root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomSnapshot {
    pub meta: SnapshotMeta,
    nodes: Vec<ElementNode>,
    /// Set when some coordinate was fractional and got rounded.
    pub rounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct SnapshotError {
    pub path: String,
    pub message: String,
}

fn err(path: &str, message: impl Into<String>) -> SnapshotError {
    SnapshotError {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Builder input for snapshots assembled in code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub tag: String,
    pub id: Option<String>,
    pub classes: Vec<String>,
    pub bbox: BoxPx,
    pub text: Option<String>,
    pub children: Vec<NodeSpec>,
}

impl NodeSpec {
    pub fn new(tag: &str, bbox: BoxPx) -> Self {
        NodeSpec {
            tag: tag.to_string(),
            id: None,
            classes: Vec::new(),
            bbox,
            text: None,
            children: Vec::new(),
        }
    }

    pub fn with_id(mut self, id: &str) -> Self {
        self.id = Some(id.to_string());
        self
    }

    pub fn with_class(mut self, class: &str) -> Self {
        self.classes.push(class.to_string());
        self
    }

    pub fn with_child(mut self, child: NodeSpec) -> Self {
        self.children.push(child);
        self
    }
}

impl DomSnapshot {
    pub fn from_tree(root: NodeSpec) -> Self {
        let mut nodes = Vec::new();
        push_node(&mut nodes, root, None, "0".to_string());
        DomSnapshot {
            meta: SnapshotMeta::default(),
            nodes,
            rounded: false,
        }
    }

    pub fn nodes(&self) -> &[ElementNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &ElementNode {
        &self.nodes[index]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, elem_id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.elem_id == elem_id)
    }

    /// Serializes back to the snapshot JSON schema.
    pub fn to_json(&self) -> Value {
        let mut meta = Map::new();
        if let Some(u) = &self.meta.url {
            meta.insert("url".into(), json!(u));
        }
        if let Some(c) = &self.meta.captured_at {
            meta.insert("captured_at".into(), json!(c));
        }
        if let Some(w) = &self.meta.warning {
            meta.insert("warning".into(), json!(w));
        }
        json!({"meta": meta, "root": self.node_json(0)})
    }

    fn node_json(&self, i: usize) -> Value {
        let n = &self.nodes[i];
        let mut obj = Map::new();
        obj.insert("tag".into(), json!(n.tag));
        if let Some(id) = &n.id {
            obj.insert("id".into(), json!(id));
        }
        obj.insert("classes".into(), json!(n.classes));
        obj.insert(
            "box".into(),
            json!({"left": n.bbox.left, "top": n.bbox.top, "width": n.bbox.width, "height": n.bbox.height}),
        );
        if let Some(t) = &n.text {
            obj.insert("text".into(), json!(t));
        }
        let children: Vec<Value> = n.children.iter().map(|&c| self.node_json(c)).collect();
        obj.insert("children".into(), Value::Array(children));
        Value::Object(obj)
    }
}

fn push_node(nodes: &mut Vec<ElementNode>, spec: NodeSpec, parent: Option<usize>, elem_id: String) {
    let index = nodes.len();
    nodes.push(ElementNode {
        elem_id: elem_id.clone(),
        tag: spec.tag,
        id: spec.id,
        classes: spec.classes,
        bbox: spec.bbox,
        text: spec.text,
        parent,
        children: Vec::new(),
    });
    if let Some(p) = parent {
        nodes[p].children.push(index);
    }
    for (k, child) in spec.children.into_iter().enumerate() {
        push_node(nodes, child, Some(index), format!("{elem_id}.{k}"));
    }
}

/// JSON Schema (draft 2020-12) of the documents [`ingest_snapshot`] accepts
/// and [`DomSnapshot::to_json`] emits.
pub const SNAPSHOT_SCHEMA: &str = include_str!("../../schema/snapshot.schema.json");

/// Parses and validates snapshot JSON. Fractional coordinates are rounded
/// half-up; negative widths or heights are rejected with the node's path.
pub fn ingest_snapshot(text: &str) -> Result<DomSnapshot, SnapshotError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| err("$", e.to_string()))?;
    let obj = doc.as_object().ok_or_else(|| err("$", "expected an object"))?;
    for key in obj.keys() {
        if key != "meta" && key != "root" {
            return Err(err("$", format!("unknown field `{key}`")));
        }
    }
    let mut meta = SnapshotMeta::default();
    if let Some(m) = obj.get("meta") {
        let m = m.as_object().ok_or_else(|| err("$.meta", "expected an object"))?;
        if let Some(key) = m.keys().find(|k| !["url", "captured_at", "warning"].contains(&k.as_str())) {
            return Err(err("$.meta", format!("unknown field `{key}`")));
        }
        let text_field = |k: &str| -> Result<Option<String>, SnapshotError> {
            match m.get(k) {
                None => Ok(None),
                Some(Value::String(s)) => Ok(Some(s.clone())),
                Some(_) => Err(err(&format!("$.meta.{k}"), "expected a string")),
            }
        };
        meta.url = text_field("url")?;
        meta.captured_at = text_field("captured_at")?;
        meta.warning = text_field("warning")?;
    }
    let root = obj.get("root").ok_or_else(|| err("$", "missing field `root`"))?;
    let mut rounded = false;
    let spec = parse_node(root, "$.root", &mut rounded)?;
    let mut snap = DomSnapshot::from_tree(spec);
    snap.meta = meta;
    snap.rounded = rounded;
    Ok(snap)
}

fn parse_node(v: &Value, path: &str, rounded: &mut bool) -> Result<NodeSpec, SnapshotError> {
    let obj = v.as_object().ok_or_else(|| err(path, "expected an object"))?;
    for key in obj.keys() {
        if !["tag", "id", "classes", "box", "text", "children"].contains(&key.as_str()) {
            return Err(err(path, format!("unknown field `{key}`")));
        }
    }
    let tag = match obj.get("tag") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(err(&format!("{path}.tag"), "expected a string")),
        None => return Err(err(path, "missing field `tag`")),
    };
    let id = match obj.get("id") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(err(&format!("{path}.id"), "expected a string")),
    };
    let classes = match obj.get("classes") {
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| err(&format!("{path}.classes[{i}]"), "expected a string"))
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(err(&format!("{path}.classes"), "expected an array")),
        None => return Err(err(path, "missing field `classes`")),
    };
    let text = match obj.get("text") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(err(&format!("{path}.text"), "expected a string")),
    };

    let box_path = format!("{path}.box");
    let bx = obj
        .get("box")
        .ok_or_else(|| err(path, "missing field `box`"))?
        .as_object()
        .ok_or_else(|| err(&box_path, "expected an object"))?;
    let mut coord = |k: &str| -> Result<i64, SnapshotError> {
        let v = bx
            .get(k)
            .ok_or_else(|| err(&box_path, format!("missing field `{k}`")))?;
        if let Some(i) = v.as_i64() {
            return Ok(i);
        }
        let f = v
            .as_f64()
            .ok_or_else(|| err(&format!("{box_path}.{k}"), "expected a number"))?;
        *rounded = true;
        Ok((f + 0.5).floor() as i64)
    };
    let bbox = BoxPx::new(coord("left")?, coord("top")?, coord("width")?, coord("height")?);
    if bbox.width < 0 {
        return Err(err(&box_path, format!("negative width {}", bbox.width)));
    }
    if bbox.height < 0 {
        return Err(err(&box_path, format!("negative height {}", bbox.height)));
    }

    let children = match obj.get("children") {
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, c)| parse_node(c, &format!("{path}.children[{i}]"), rounded))
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(err(&format!("{path}.children"), "expected an array")),
        None => return Err(err(path, "missing field `children`")),
    };

    Ok(NodeSpec {
        tag,
        id,
        classes,
        bbox,
        text,
        children,
    })
}
