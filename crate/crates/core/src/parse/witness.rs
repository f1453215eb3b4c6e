use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::BlockModel;

/// On-disk witness. Field order gives sorted keys in the JSON output.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFile {
    assignment: BTreeMap<String, Vec<usize>>,
    blocks: usize,
}

/// `{"assignment":{"x":[0,2],...},"blocks":s}` with sorted keys and
/// sorted index lists.
pub fn encode_witness(model: &BlockModel) -> String {
    let file = WitnessFile {
        assignment: model
            .names()
            .iter()
            .zip(model.values())
            .map(|(n, v)| (n.clone(), v.ones().collect()))
            .collect(),
        blocks: model.blocks(),
    };
    serde_json::to_string(&file).expect("witness serialization cannot fail")
}

pub fn decode_witness(text: &str) -> Result<BlockModel> {
    let file: WitnessFile = serde_json::from_str(text).map_err(|e| Error::Witness(e.to_string()))?;
    BlockModel::from_indices(
        file.blocks,
        file.assignment.iter().map(|(n, v)| (n.clone(), v.as_slice())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = BlockModel::from_indices(1, [("y".to_string(), &[0usize][..]), ("x".to_string(), &[][..])]).unwrap();
        let text = encode_witness(&m);
        assert_eq!(text, r#"{"assignment":{"x":[],"y":[0]},"blocks":1}"#);
        let back = decode_witness(&text).unwrap();
        assert_eq!(back.indices("x"), m.indices("x"));
        assert_eq!(back.indices("y"), m.indices("y"));
        assert_eq!(back.blocks(), 1);
    }

    #[test]
    fn decode_errors() {
        assert!(decode_witness(r#"{"assignment":{},"blocks":0}"#).is_err());
        assert!(decode_witness(r#"{"assignment":{"x":[3]},"blocks":2}"#).is_err());
        assert!(decode_witness(r#"{"blocks":1}"#).is_err());
        assert!(decode_witness("not json").is_err());
    }
}
