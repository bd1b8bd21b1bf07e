"""Reply generators."""
