"""nfvplan: exact MILP provisioning planner and what-if explorer for NFV."""

__version__ = "0.1.0"
