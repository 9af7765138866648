"""Decision-tree classifiers (ID3, C4.5, alternating decision trees) for
student-retention data, with ARFF I/O and stratified cross-validation."""

__version__ = "0.1.0"

from .adtree import ADTModel, ADTreeClassifier, Splitter
from .arff import ArffError, Attribute, Dataset, load_arff, parse_arff, save_arff, write_arff
from .c45 import C45Classifier, prune
from .evaluation import EvalReport, cross_validate, stratified_folds
from .id3 import UNCLASSIFIED, ID3Classifier
from .persistence import load_model, save_model
from .schema import RETENTION_ATTRIBUTES, StudentRecord, encode_record, generate_synthetic

__all__ = [
    "ADTModel", "ADTreeClassifier", "Splitter",
    "ArffError", "Attribute", "Dataset", "load_arff", "parse_arff", "save_arff", "write_arff",
    "C45Classifier", "prune",
    "EvalReport", "cross_validate", "stratified_folds",
    "UNCLASSIFIED", "ID3Classifier",
    "load_model", "save_model",
    "RETENTION_ATTRIBUTES", "StudentRecord", "encode_record", "generate_synthetic",
]
