#![no_main]

use libfuzzer_sys::fuzz_target;
use randwave::spectral::dump::{decode_field, encode_field};

fuzz_target!(|data: &[u8]| {
    if let Ok(named) = decode_field(data) {
        let bytes = encode_field(&named.name, &named.field).expect("decoded field re-encodes");
        let again = decode_field(&bytes).expect("encoded field decodes");
        assert_eq!(again.name, named.name);
    }
});
