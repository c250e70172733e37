use nilalg::schedule::{enumerate_sets, set_iter};

const GOLDEN: &str = include_str!("golden/sets.txt");

#[test]
fn first_sets_match_golden_file() {
    let want: Vec<&str> = GOLDEN.lines().collect();
    let got: Vec<String> = set_iter().take(want.len()).map(|s| s.to_string()).collect();
    assert_eq!(got, want);
    for (i, line) in want.iter().enumerate() {
        assert_eq!(enumerate_sets(i + 1).to_string(), *line);
    }
}
