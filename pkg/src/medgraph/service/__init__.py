from .app import DIGEST_HEADER, create_app

__all__ = ["DIGEST_HEADER", "create_app"]
