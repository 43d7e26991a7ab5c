from .convexity import best_lambda, sharp_lambda, verify_theorem  # noqa[F401]
from .exceptions import SharpConvexError                          # noqa[F401]
from .internals import VerifyReport                               # noqa[F401]
from .spherical_means import sphere_mean                          # noqa[F401]
from .ultraspherical import check_hyp, nu_norm, r_star            # noqa[F401]
