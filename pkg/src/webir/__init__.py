"""Miniature web retrieval pipeline.

Local-corpus ingestion, PageRank and HITS link analysis, w-shingling
near-duplicate detection, an inverted index with a PageRank-weighted query
processor, and test-collection evaluation measures.
"""

from .corpus import Corpus, CrawlPolicy, Document, canonicalize, extract_links, ingest
from .dedup import DuplicateReport, ShingleSet, find_near_duplicates, fingerprint, resemblance, shingle_set, shingles
from .evaluation import (
    DiscountSpec,
    GainSpec,
    PRPoint,
    Qrels,
    Run,
    dcg_at_k,
    interpolated_precision,
    make_gain,
    parse_qrels,
    parse_run,
    pool,
    pr_curve,
    precision_at_k,
    recall_at_k,
    write_run,
)
from .index import InvertedIndex, NormalizedQuery, SearchResult, build_index, normalize_query, search
from .kernels import BACKEND
from .ranking import HitsParams, HubAuthScores, PageRankParams, RankVector, build_query_subgraph, hits, pagerank
from .webgraph import WebGraph, back_links, out_degree, subgraph

__version__ = "0.1.0"
