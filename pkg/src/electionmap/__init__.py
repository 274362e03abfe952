"""Maps of elections: cultures, distances, embeddings and voting rules."""
