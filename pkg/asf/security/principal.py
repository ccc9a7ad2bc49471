from collections import namedtuple

__all__ = ['SecurityError', 'Principal', 'ROLE_RANKS', 'LOA_LEVELS', 'GUEST', 'MEMBER', 'ADMIN', 'role_rank', 'loa_rank',
           'ANONYMOUS_SUBJECT']

GUEST = 'guest'
MEMBER = 'member'
ADMIN = 'admin'

# a higher rank includes the permissions of all lower ranks
ROLE_RANKS = {GUEST: 0, MEMBER: 1, ADMIN: 2}
LOA_LEVELS = ('low', 'substantial', 'high')

ANONYMOUS_SUBJECT = 'anonymous'


class SecurityError(Exception):
    pass


def role_rank(role):
    try:
        return ROLE_RANKS[role]
    except KeyError:
        raise ValueError("Unknown role '{}'! Expected one of {}.".format(role, sorted(ROLE_RANKS)))


def loa_rank(loa):
    try:
        return LOA_LEVELS.index(loa)
    except ValueError:
        raise ValueError("Unknown level of assurance '{}'! Expected one of {}.".format(loa, LOA_LEVELS))


class Principal(namedtuple('Principal', ('subject', 'roles', 'loa', 'token_id'))):
    """An authenticated identity: subject, roles, level of assurance and the token it presented."""
    __slots__ = ()

    def __new__(cls, subject, roles, loa='low', token_id=None):
        _roles = frozenset(roles)
        if not _roles:
            raise ValueError("A principal needs at least one role!")
        for _role in _roles:
            role_rank(_role)
        loa_rank(loa)
        return super(Principal, cls).__new__(cls, subject, _roles, loa, token_id)

    @classmethod
    def anonymous(cls):
        return cls(ANONYMOUS_SUBJECT, [GUEST], 'low')

    @property
    def rank(self):
        """rank of the most powerful role held"""
        return max(role_rank(_r) for _r in self.roles)

    def has_role(self, role):
        return self.rank >= role_rank(role)

    @property
    def is_guest_only(self):
        return not self.has_role(MEMBER)

    def with_loa(self, loa):
        return self._replace(loa=loa)

    def to_document(self):
        return dict(subject=self.subject, roles=sorted(self.roles), loa=self.loa)
