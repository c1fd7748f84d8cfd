#![no_main]

use libfuzzer_sys::fuzz_target;
use randwave::trees::BinaryTree;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(tree) = text.parse::<BinaryTree>() {
            let back: BinaryTree = tree.encoding().parse().expect("encoding parses");
            assert_eq!(back.encoding(), tree.encoding());
            assert_eq!(tree.leaves(), tree.internal_nodes() + 1);
        }
    }
});
