#![no_main]

use libfuzzer_sys::fuzz_target;
use randwave::picard::IterateRecord;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(rec) = IterateRecord::from_json(text) {
            let json = rec.to_json().expect("record serializes");
            IterateRecord::from_json(&json).expect("record round-trips");
        }
    }
});
