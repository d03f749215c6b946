//! Shapes and batch sizes of the standard benchmark data sets.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetPreset {
    pub name: &'static str,
    pub instances: usize,
    pub features: usize,
    pub labels: usize,
    /// Mean number of relevant labels per instance.
    pub cardinality: f64,
    pub batch_size: usize,
    pub domain: &'static str,
}

const fn preset(
    name: &'static str,
    instances: usize,
    features: usize,
    labels: usize,
    cardinality: f64,
    batch_size: usize,
    domain: &'static str,
) -> DatasetPreset {
    DatasetPreset {
        name,
        instances,
        features,
        labels,
        cardinality,
        batch_size,
        domain,
    }
}

pub const PRESETS: [DatasetPreset; 8] = [
    preset("music_emotion", 6833, 98, 11, 2.42, 400, "music"),
    preset("music_style", 6839, 98, 10, 1.44, 400, "music"),
    preset("mirflickr", 10433, 100, 7, 1.77, 1000, "image"),
    preset("enron", 1702, 1001, 53, 3.37, 100, "text"),
    preset("scene", 2407, 294, 6, 1.07, 100, "image"),
    preset("yeast", 2417, 103, 14, 4.23, 100, "biology"),
    preset("slashdot", 3782, 1079, 22, 1.18, 200, "text"),
    preset("tmc", 21519, 500, 22, 2.15, 1000, "text"),
];

pub fn find(name: &str) -> Option<&'static DatasetPreset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        let scene = find("scene").unwrap();
        assert_eq!((scene.instances, scene.features, scene.labels), (2407, 294, 6));
        assert_eq!(find("tmc").unwrap().batch_size, 1000);
        assert_eq!(find("enron").unwrap().batch_size, 100);
        assert!(find("bibtex").is_none());
    }
}
