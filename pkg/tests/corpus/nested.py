class Outer:
  class Inner:
    def deep(self):
      def inner_fn():
        pass
      return inner_fn

  def shallow(self):
    pass


# helpers
def top():
    pass
