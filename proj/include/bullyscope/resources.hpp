#ifndef BULLYSCOPE_RESOURCES_HPP
#define BULLYSCOPE_RESOURCES_HPP

#include <string_view>

#include "lexicon.hpp"

namespace bullyscope::resources {

// Bundled English stop-word list.
inline constexpr std::string_view kStopwords = R"(a
about
above
after
again
against
all
am
an
and
any
are
as
at
be
because
been
before
being
below
between
both
but
by
can
could
did
do
does
doing
down
during
each
few
for
from
further
had
has
have
having
he
her
here
hers
herself
him
himself
his
how
i
if
in
into
is
it
its
itself
just
me
more
most
my
myself
no
nor
not
now
of
off
on
once
only
or
other
our
ours
ourselves
out
over
own
same
she
should
so
some
such
than
that
the
their
theirs
them
themselves
then
there
these
they
this
those
through
to
too
under
until
up
very
was
we
were
what
when
where
which
while
who
whom
why
will
with
would
you
your
yours
yourself
yourselves
)";

// Small demonstration dictionary in the category-lexicon format. It stands
// in for licensed psycholinguistic dictionaries in tests and demos.
inline constexpr std::string_view kDemoCategories = R"(# category: patterns
swear: damn damn* hell crap shit* fuck* bitch* ass asshole* bastard* piss* wtf stfu dick* slut* whore* douche* jerk* suck*
negation: no not never none nobody nothing neither nor cannot cant can't don't dont won't wont isn't isnt aren't arent
religion: god gods church pray* prayer* bible jesus christ* heaven holy faith* soul* religio* sin sinner* amen lord allah
death: die died dies dying dead death* kill* suicide* murder* grave* funeral* bury buried coffin* corpse* fatal* ghost* rip
body: face* body bodies hair* eye* skin* fat thin nose* mouth* belly* butt* leg* arm arms chest* teeth tooth ugly
sexual: sex* sexy horny naked nude* porn* hooker* virgin* kiss* boob* dick* slut* whore* gay lesbian* hot
anger: hate* hating angry anger* mad rage* kill* fight* fought attack* hostil* annoy* stupid idiot* dumb* moron* loser* freak*
posemo: love* lovely nice good great happy* awesome beautiful* best cute* amazing* fun funny sweet* perfect* glad wow
negemo: sad* cry* hurt* pain* fear* afraid worr* lonely alone ugly hate* bad awful terrible* disgust* gross pathetic*
i: i me my mine myself i'm im i've ive
you: you your yours yourself u ur youre you're yall
)";

inline Lexicon default_stopwords() { return parse_lexicon("stopwords", kStopwords); }

inline CategoryLexicon demo_categories() { return parse_category_lexicon(kDemoCategories); }

}  // namespace bullyscope::resources

#endif  // BULLYSCOPE_RESOURCES_HPP
