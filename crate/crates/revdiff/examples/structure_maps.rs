//! Tab-separated dumps of the structure maps of the multiset exponential
//! over the Booleans, one letter, bags of size at most 2.

use revdiff::bang::BangConfig;
use revdiff::algebra::Semiring;
use revdiff::model::Model;
use revdiff::wrel::Obj;

fn main() {
    let m = Model::bags(Semiring::Boolean, BangConfig::new(2, 2));
    let a = Obj::letters("A", 1);
    let b = Obj::base("B", &["p"]);
    let maps = [
        ("δ (digging)", m.delta(&a)),
        ("ε (dereliction)", m.epsilon(&a)),
        ("d (deriving)", m.d(&a)),
        ("d° (coderiving)", m.dcirc(&a)),
        ("r (reverse deriving)", m.r(&a)),
        ("χ (Seely)", m.chi(&a, &b)),
    ];
    for (name, map) in maps {
        let mor = map.materialize();
        println!("== {name}: {} -> {}", mor.dom(), mor.cod());
        print!("{}", mor.dump());
        for row in mor.truncated_rows() {
            println!("# row {row} is cut at the caps");
        }
    }
}
