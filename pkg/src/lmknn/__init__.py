"""Landmark-accelerated memory-based collaborative filtering.

Rows (users, or items in item-based mode) are re-embedded as their
similarities to a few landmark rows, and kNN prediction runs on the reduced
representation.
"""

from .evaluation import ExperimentConfig, RunReport, mae, run_experiment, sweep
from .ingest import DatasetSpec, chronological_cut, kfold_split, load, parse_ratings
from .kernels import BACKEND
from .landmark import (LandmarkEmbedding, LandmarkSet, Strategy, build_embedding, landmark_cosine,
                       landmark_similarity_matrix, select_landmarks)
from .measures import UNDEFINED, Measure, is_defined
from .predict import Prediction, PredictorConfig, predict, predict_batch
from .ratings import EntityView, Rating, RatingMatrix, RatingTable, build_matrix, corated_items, transpose_view
from .similarity import cosine, euclidean_similarity, pearson, similarity_matrix

__version__ = "0.1.0"
