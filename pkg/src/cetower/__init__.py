"""Centralizer-extension towers, equations over groups and explicit embeddings."""
