use rankone::exact::*;
use rankone::iwasawa::*;
use rankone::lie::*;

fn main() {
    let spec = FormSpec::new(Family::U, 2).unwrap();
    let basis = build_basis(&spec).unwrap();
    // replicate the pipeline with public pieces: n(base) m_y e^{tX1}
    let x1 = &basis.gen("X1").unwrap().mat;
    let egt = TpMatrix::exp_nilpotent(x1).unwrap();
    println!("exp(tX1):");
    for i in 0..3 {
        for j in 0..3 {
            print!("  ({i},{j}) {:?}", egt.entry(i, j));
        }
        println!();
    }
    let zt = &basis.gen("Zt").unwrap().mat;
    let ez = TpMatrix::exp_nilpotent(zt).unwrap();
    println!("exp(tZt):");
    for i in 0..3 {
        for j in 0..3 {
            print!("  ({i},{j}) {:?}", ez.entry(i, j));
        }
        println!();
    }
    let xt = &basis.gen("Xt1").unwrap().mat;
    let et = TpMatrix::exp_nilpotent(xt).unwrap();
    println!("exp(tXt1):");
    for i in 0..3 {
        for j in 0..3 {
            print!("  ({i},{j}) {:?}", et.entry(i, j));
        }
        println!();
    }
}
