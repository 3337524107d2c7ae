from .cluster import Dendrogram, Linkage, Merge, agglomerate
from .convergence import ConvergenceReport, concentration_bound, convergence_experiment
from .distances import DistanceMatrix, pairwise_distances
from .probe import KRRPredictor, ProbeReport, fit_krr, krr_predict, probe_generalization, spearman

__all__ = [
    "ConvergenceReport",
    "Dendrogram",
    "DistanceMatrix",
    "KRRPredictor",
    "Linkage",
    "Merge",
    "ProbeReport",
    "agglomerate",
    "concentration_bound",
    "convergence_experiment",
    "fit_krr",
    "krr_predict",
    "pairwise_distances",
    "probe_generalization",
    "spearman",
]
