use flatcover::catalog::build_cylinder_iet;
use flatcover::homology::HomologyModel;
use flatcover::reproduce::random_generator_spec;
use flatcover::surface::TranslationSurface;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random square-tiled surface from the cylinder/IET generator.
pub fn generated(seed: u64) -> (TranslationSurface, HomologyModel) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = random_generator_spec(&mut rng);
    let s = build_cylinder_iet(&spec).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    let h = HomologyModel::build(&s).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    (s, h)
}
