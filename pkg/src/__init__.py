"""
FeTS Federation Simulator - Source Package

Federated brain-tumor segmentation simulator and scoring toolkit: synthetic
multi-institution data, a round-synchronous federation with pluggable
aggregation, segmentation metrics and the challenge ranking.
"""
