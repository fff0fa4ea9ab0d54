// Every example must keep compiling and running.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                let _ = main();
            }
        }
    };
}

example!(orbit);
example!(scan);
example!(cycles);
example!(verify);
example!(kseq);
example!(probe);
example!(float_pitfall);
